use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexpr {
    Atom(String),
    List(Vec<Sexpr>),
}

impl Sexpr {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexpr::Atom(a) => Some(a),
            Sexpr::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(items) => Some(items),
            Sexpr::Atom(_) => None,
        }
    }
}

impl fmt::Display for Sexpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexpr::Atom(a) => f.write_str(a),
            Sexpr::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Reads every top-level expression in `text`. `;` starts a line comment.
/// Atoms are lower-cased, as PDDL names are case-insensitive.
pub fn parse_all(text: &str) -> Result<Vec<Sexpr>, String> {
    let mut stack: Vec<Vec<Sexpr>> = vec![Vec::new()];
    let mut atom = String::new();
    let flush = |atom: &mut String, stack: &mut Vec<Vec<Sexpr>>| {
        if !atom.is_empty() {
            stack.last_mut().expect("non-empty stack").push(Sexpr::Atom(atom.to_lowercase()));
            atom.clear();
        }
    };
    for line in text.lines() {
        let line = line.split(';').next().unwrap_or("");
        for ch in line.chars() {
            match ch {
                '(' => {
                    flush(&mut atom, &mut stack);
                    stack.push(Vec::new());
                }
                ')' => {
                    flush(&mut atom, &mut stack);
                    if stack.len() < 2 {
                        return Err("unbalanced `)`".into());
                    }
                    let done = stack.pop().expect("checked");
                    stack.last_mut().expect("checked").push(Sexpr::List(done));
                }
                c if c.is_whitespace() => flush(&mut atom, &mut stack),
                c => atom.push(c),
            }
        }
        flush(&mut atom, &mut stack);
    }
    if stack.len() != 1 {
        return Err("unbalanced `(`".into());
    }
    Ok(stack.pop().expect("one frame"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists_and_comments() {
        let parsed = parse_all("(move A b) ; cost 1\n(pickup (x))").unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].to_string(), "(move a b)");
        assert_eq!(parsed[1].to_string(), "(pickup (x))");
        assert!(parse_all("(a").is_err());
        assert!(parse_all("a)").is_err());
    }
}
