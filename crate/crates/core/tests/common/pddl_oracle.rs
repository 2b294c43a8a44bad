//! A self-contained PDDL reader, grammar checker and breadth-first STRIPS
//! planner, sharing no code with the crate under test.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

#[derive(Debug, Clone, PartialEq)]
pub enum Sx {
    Atom(String),
    List(Vec<Sx>),
}

impl Sx {
    fn atom(&self) -> Option<&str> {
        match self {
            Sx::Atom(a) => Some(a),
            Sx::List(_) => None,
        }
    }

    fn list(&self) -> Option<&[Sx]> {
        match self {
            Sx::List(l) => Some(l),
            Sx::Atom(_) => None,
        }
    }
}

pub fn read(text: &str) -> Result<Vec<Sx>, String> {
    let mut stack: Vec<Vec<Sx>> = vec![Vec::new()];
    let mut word = String::new();
    let flush = |word: &mut String, stack: &mut Vec<Vec<Sx>>| {
        if !word.is_empty() {
            stack.last_mut().unwrap().push(Sx::Atom(word.to_lowercase()));
            word.clear();
        }
    };
    for line in text.lines() {
        let line = line.split(';').next().unwrap();
        for ch in line.chars() {
            match ch {
                '(' => {
                    flush(&mut word, &mut stack);
                    stack.push(Vec::new());
                }
                ')' => {
                    flush(&mut word, &mut stack);
                    let done = stack.pop().unwrap();
                    stack.last_mut().ok_or("unbalanced `)`")?.push(Sx::List(done));
                }
                c if c.is_whitespace() => flush(&mut word, &mut stack),
                c if c.is_ascii_alphanumeric() || "-_?:".contains(c) => word.push(c),
                c => return Err(format!("unexpected character `{c}`")),
            }
        }
        flush(&mut word, &mut stack);
    }
    if stack.len() != 1 {
        return Err("unbalanced `(`".into());
    }
    Ok(stack.pop().unwrap())
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

fn is_var(s: &str) -> bool {
    s.strip_prefix('?').is_some_and(is_name)
}

/// `a b - t c - u` into `[(a, t), (b, t), (c, u)]`.
fn typed_list(items: &[Sx], var: bool, types: &BTreeSet<String>) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    let mut pending = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let a = items[i].atom().ok_or("nested list in typed list")?;
        if a == "-" {
            let t = items.get(i + 1).and_then(Sx::atom).ok_or("missing type after `-`")?;
            if !types.contains(t) {
                return Err(format!("undeclared type `{t}`"));
            }
            if pending.is_empty() {
                return Err("`-` with nothing to type".into());
            }
            out.extend(pending.drain(..).map(|n: String| (n, t.to_string())));
            i += 2;
            continue;
        }
        if (var && !is_var(a)) || (!var && !is_name(a)) {
            return Err(format!("bad {} `{a}`", if var { "variable" } else { "name" }));
        }
        pending.push(a.to_string());
        i += 1;
    }
    if !pending.is_empty() {
        if types.is_empty() {
            out.extend(pending.into_iter().map(|n| (n, "object".to_string())));
        } else {
            return Err(format!("untyped names {pending:?}"));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub positive: bool,
    pub pred: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Schema {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub pre: Vec<Lit>,
    pub eff: Vec<Lit>,
}

#[derive(Debug, Clone)]
pub struct Domain {
    pub name: String,
    pub requirements: BTreeSet<String>,
    pub types: BTreeSet<String>,
    pub predicates: BTreeMap<String, Vec<String>>,
    pub actions: Vec<Schema>,
}

#[derive(Debug, Clone)]
pub struct ProblemDef {
    pub name: String,
    pub objects: BTreeMap<String, String>,
    pub init: BTreeSet<Vec<String>>,
    pub goal: Vec<Lit>,
}

fn literal(sx: &Sx, allow_not: bool) -> Result<Lit, String> {
    let l = sx.list().ok_or("expected an atomic formula")?;
    if l.first().and_then(Sx::atom) == Some("not") {
        if !allow_not || l.len() != 2 {
            return Err("negation not allowed here".into());
        }
        let inner = literal(&l[1], false)?;
        return Ok(Lit { positive: false, ..inner });
    }
    let pred = l.first().and_then(Sx::atom).ok_or("empty formula")?;
    let args = l[1..].iter().map(|a| a.atom().map(str::to_string).ok_or("nested term")).collect::<Result<_, _>>()?;
    Ok(Lit { positive: true, pred: pred.to_string(), args })
}

fn conjunction(sx: &Sx, allow_not: bool) -> Result<Vec<Lit>, String> {
    let l = sx.list().ok_or("expected a formula")?;
    if l.first().and_then(Sx::atom) == Some("and") {
        l[1..].iter().map(|f| literal(f, allow_not)).collect()
    } else {
        Ok(vec![literal(sx, allow_not)?])
    }
}

fn check_lit(lit: &Lit, preds: &BTreeMap<String, Vec<String>>, typeof_: &dyn Fn(&str) -> Option<String>) -> Result<(), String> {
    let sig = preds.get(&lit.pred).ok_or_else(|| format!("undeclared predicate `{}`", lit.pred))?;
    if sig.len() != lit.args.len() {
        return Err(format!("`{}` takes {} arguments, got {}", lit.pred, sig.len(), lit.args.len()));
    }
    for (a, t) in lit.args.iter().zip(sig) {
        let at = typeof_(a).ok_or_else(|| format!("undeclared term `{a}`"))?;
        if &at != t {
            return Err(format!("`{a}` is a {at}, `{}` expects {t}", lit.pred));
        }
    }
    Ok(())
}

fn header<'a>(top: &'a [Sx], kind: &str) -> Result<(&'a [Sx], String), String> {
    let [Sx::List(l)] = top else { return Err("expected exactly one top-level form".into()) };
    if l.first().and_then(Sx::atom) != Some("define") {
        return Err("expected `define`".into());
    }
    let head = l.get(1).and_then(Sx::list).ok_or("missing header")?;
    if head.len() != 2 || head[0].atom() != Some(kind) {
        return Err(format!("expected `({kind} <name>)`"));
    }
    let name = head[1].atom().filter(|n| is_name(n)).ok_or("bad name")?;
    Ok((&l[2..], name.to_string()))
}

pub fn check_domain(text: &str) -> Result<Domain, String> {
    let top = read(text)?;
    let (sections, name) = header(&top, "domain")?;
    let mut d = Domain { name, requirements: BTreeSet::new(), types: BTreeSet::new(), predicates: BTreeMap::new(), actions: Vec::new() };
    for s in sections {
        let l = s.list().ok_or("stray atom in domain")?;
        let key = l.first().and_then(Sx::atom).ok_or("empty section")?;
        match key {
            ":requirements" => {
                for r in &l[1..] {
                    let r = r.atom().ok_or("bad requirement")?;
                    if ![":strips", ":typing", ":negative-preconditions"].contains(&r) {
                        return Err(format!("unsupported requirement `{r}`"));
                    }
                    d.requirements.insert(r.to_string());
                }
            }
            ":types" => {
                if !d.requirements.contains(":typing") {
                    return Err(":types without :typing".into());
                }
                for t in &l[1..] {
                    let t = t.atom().filter(|t| is_name(t)).ok_or("bad type name")?;
                    d.types.insert(t.to_string());
                }
            }
            ":predicates" => {
                for p in &l[1..] {
                    let p = p.list().ok_or("bad predicate")?;
                    let pname = p.first().and_then(Sx::atom).filter(|n| is_name(n)).ok_or("bad predicate name")?;
                    let params = typed_list(&p[1..], true, &d.types)?;
                    if d.predicates.insert(pname.to_string(), params.into_iter().map(|(_, t)| t).collect()).is_some() {
                        return Err(format!("predicate `{pname}` declared twice"));
                    }
                }
            }
            ":action" => {
                let aname = l.get(1).and_then(Sx::atom).filter(|n| is_name(n)).ok_or("bad action name")?;
                let mut schema = Schema { name: aname.to_string(), params: Vec::new(), pre: Vec::new(), eff: Vec::new() };
                let mut i = 2;
                while i < l.len() {
                    let k = l[i].atom().ok_or("expected an action keyword")?;
                    let v = l.get(i + 1).ok_or("missing value")?;
                    match k {
                        ":parameters" => schema.params = typed_list(v.list().ok_or("bad parameters")?, true, &d.types)?,
                        ":precondition" => {
                            schema.pre = conjunction(v, d.requirements.contains(":negative-preconditions"))?
                        }
                        ":effect" => schema.eff = conjunction(v, true)?,
                        other => return Err(format!("unknown action keyword `{other}`")),
                    }
                    i += 2;
                }
                let params = schema.params.clone();
                let typeof_ = |a: &str| params.iter().find(|(n, _)| n == a).map(|(_, t)| t.clone());
                for lit in schema.pre.iter().chain(&schema.eff) {
                    check_lit(lit, &d.predicates, &typeof_).map_err(|e| format!("action {aname}: {e}"))?;
                }
                d.actions.push(schema);
            }
            other => return Err(format!("unknown domain section `{other}`")),
        }
    }
    Ok(d)
}

pub fn check_problem(text: &str, domain: &Domain) -> Result<ProblemDef, String> {
    let top = read(text)?;
    let (sections, name) = header(&top, "problem")?;
    let mut p = ProblemDef { name, objects: BTreeMap::new(), init: BTreeSet::new(), goal: Vec::new() };
    let mut seen = BTreeSet::new();
    for s in sections {
        let l = s.list().ok_or("stray atom in problem")?;
        let key = l.first().and_then(Sx::atom).ok_or("empty section")?;
        if !seen.insert(key.to_string()) {
            return Err(format!("section `{key}` repeated"));
        }
        let objects = p.objects.clone();
        let typeof_ = |a: &str| objects.get(a).cloned();
        match key {
            ":domain" => {
                if l.get(1).and_then(Sx::atom) != Some(domain.name.as_str()) || l.len() != 2 {
                    return Err("problem names a different domain".into());
                }
            }
            ":objects" => {
                for (n, t) in typed_list(&l[1..], false, &domain.types)? {
                    if p.objects.insert(n.clone(), t).is_some() {
                        return Err(format!("object `{n}` declared twice"));
                    }
                }
            }
            ":init" => {
                for f in &l[1..] {
                    let lit = literal(f, false)?;
                    check_lit(&lit, &domain.predicates, &typeof_)?;
                    let mut fact = vec![lit.pred];
                    fact.extend(lit.args);
                    p.init.insert(fact);
                }
            }
            ":goal" => {
                let goal = l.get(1).ok_or("empty goal")?;
                p.goal = conjunction(goal, false)?;
                for lit in &p.goal {
                    check_lit(lit, &domain.predicates, &typeof_)?;
                }
            }
            other => return Err(format!("unknown problem section `{other}`")),
        }
    }
    for required in [":domain", ":objects", ":init", ":goal"] {
        if !seen.contains(required) {
            return Err(format!("missing `{required}`"));
        }
    }
    Ok(p)
}

type State = BTreeSet<Vec<String>>;

fn holds(state: &State, lit: &Lit, bind: &BTreeMap<String, String>) -> bool {
    let mut fact = vec![lit.pred.clone()];
    fact.extend(lit.args.iter().map(|a| bind.get(a).cloned().unwrap_or_else(|| a.clone())));
    state.contains(&fact) == lit.positive
}

/// All parameter bindings satisfying `schema`'s preconditions in `state`.
fn bindings(schema: &Schema, state: &State, objects: &BTreeMap<String, String>) -> Vec<BTreeMap<String, String>> {
    let mut partial = vec![BTreeMap::new()];
    for lit in schema.pre.iter().filter(|l| l.positive) {
        let mut next = Vec::new();
        for b in &partial {
            for fact in state.iter().filter(|f| f[0] == lit.pred && f.len() == lit.args.len() + 1) {
                let mut nb: BTreeMap<String, String> = b.clone();
                let ok = lit.args.iter().zip(&fact[1..]).all(|(v, o)| match nb.get(v) {
                    Some(bound) => bound == o,
                    None => {
                        nb.insert(v.clone(), o.clone());
                        true
                    }
                });
                if ok {
                    next.push(nb);
                }
            }
        }
        partial = next;
    }
    for (v, t) in &schema.params {
        partial = partial
            .into_iter()
            .flat_map(|b| {
                if b.contains_key(v) {
                    vec![b]
                } else {
                    objects.iter().filter(|(_, ot)| *ot == t).map(|(o, _)| { let mut nb = b.clone(); nb.insert(v.clone(), o.clone()); nb }).collect()
                }
            })
            .collect();
    }
    partial
        .into_iter()
        .filter(|b| schema.params.iter().all(|(v, t)| objects.get(&b[v]) == Some(t)))
        .filter(|b| schema.pre.iter().all(|l| holds(state, l, b)))
        .collect()
}

/// Shortest plan by breadth-first search over world states, as plan lines.
pub fn bfs_plan(domain: &Domain, problem: &ProblemDef) -> Option<Vec<String>> {
    let start: State = problem.init.clone();
    let goal_met = |s: &State| problem.goal.iter().all(|l| holds(s, l, &BTreeMap::new()));
    let mut seen: HashSet<State> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, Vec::new())]);
    while let Some((state, plan)) = queue.pop_front() {
        if goal_met(&state) {
            return Some(plan);
        }
        for schema in &domain.actions {
            for b in bindings(schema, &state, &problem.objects) {
                let mut next = state.clone();
                let ground = |l: &Lit| {
                    let mut f = vec![l.pred.clone()];
                    f.extend(l.args.iter().map(|a| b[a].clone()));
                    f
                };
                for l in schema.eff.iter().filter(|l| !l.positive) {
                    next.remove(&ground(l));
                }
                for l in schema.eff.iter().filter(|l| l.positive) {
                    next.insert(ground(l));
                }
                if seen.insert(next.clone()) {
                    let mut p = plan.clone();
                    let args: Vec<&str> = schema.params.iter().map(|(v, _)| b[v].as_str()).collect();
                    p.push(format!("({} {})", schema.name, args.join(" ")));
                    queue.push_back((next, p));
                }
            }
        }
    }
    None
}
