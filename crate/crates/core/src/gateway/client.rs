use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpStream, ToSocketAddrs};
use std::sync::{mpsc, Arc};

use serde::Serialize;

use super::hub::{Hub, Outbound, Outbox, Session};
use super::protocol::{decode_line, MessageType, WireMessage};

/// Client side of a session, over TCP or in memory.
pub trait Connection {
    /// Sends a message with the next outbound `seq`.
    fn send(&mut self, kind: MessageType, payload: &impl Serialize) -> io::Result<()>;
    /// Next inbound message; an error once the session is closed.
    fn recv(&mut self) -> io::Result<WireMessage>;
}

fn decode(line: &str) -> io::Result<WireMessage> {
    decode_line(line).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("{e:?}")))
}

pub struct RemoteConnection {
    reader: BufReader<TcpStream>,
    writer: TcpStream,
    seq: u64,
}

impl RemoteConnection {
    pub fn connect(addr: impl ToSocketAddrs) -> io::Result<Self> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        Ok(RemoteConnection { reader: BufReader::new(stream.try_clone()?), writer: stream, seq: 0 })
    }

    /// Writes raw bytes followed by a newline, bypassing framing.
    pub fn send_raw(&mut self, line: &[u8]) -> io::Result<()> {
        self.writer.write_all(line)?;
        self.writer.write_all(b"\n")
    }
}

impl Connection for RemoteConnection {
    fn send(&mut self, kind: MessageType, payload: &impl Serialize) -> io::Result<()> {
        self.seq += 1;
        let line = WireMessage::new(kind, self.seq, payload).to_line();
        self.send_raw(line.as_bytes())
    }

    fn recv(&mut self) -> io::Result<WireMessage> {
        let mut line = String::new();
        if self.reader.read_line(&mut line)? == 0 {
            return Err(io::Error::new(io::ErrorKind::UnexpectedEof, "session closed"));
        }
        decode(line.trim_end())
    }
}

/// In-process session against a `Hub`; handling is synchronous, so every
/// reply is queued by the time `send` returns.
pub struct LocalConnection {
    hub: Arc<Hub>,
    session: Option<Session>,
    rx: mpsc::Receiver<Outbound>,
    seq: u64,
}

impl LocalConnection {
    pub fn open(hub: Arc<Hub>) -> Self {
        let (tx, rx) = mpsc::channel();
        let session = hub.open_session(Outbox::new(tx));
        LocalConnection { hub, session, rx, seq: 0 }
    }

    pub fn session_id(&self) -> Option<&str> {
        self.session.as_ref().map(|s| s.id.as_str())
    }

    pub fn send_raw(&mut self, line: &str) {
        if let Some(session) = self.session.as_mut() {
            self.hub.handle_raw(session, line.as_bytes());
        }
    }

    /// All messages queued so far.
    pub fn drain(&mut self) -> Vec<WireMessage> {
        let mut out = Vec::new();
        while let Ok(Outbound::Line(line)) = self.rx.try_recv() {
            out.push(decode(&line).expect("hub emits valid lines"));
        }
        out
    }

    /// Raw queued lines, for byte-exact transcripts.
    pub fn drain_lines(&mut self) -> Vec<String> {
        let mut out = Vec::new();
        while let Ok(Outbound::Line(line)) = self.rx.try_recv() {
            out.push(line);
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.session.as_ref().is_none_or(|s| s.is_closed())
    }

    pub fn disconnect(&mut self) {
        if let Some(mut session) = self.session.take() {
            self.hub.disconnect(&mut session);
        }
    }
}

impl Drop for LocalConnection {
    fn drop(&mut self) {
        self.disconnect();
    }
}

impl Connection for LocalConnection {
    fn send(&mut self, kind: MessageType, payload: &impl Serialize) -> io::Result<()> {
        self.seq += 1;
        let line = WireMessage::new(kind, self.seq, payload).to_line();
        match self.session.as_mut() {
            Some(session) if !session.is_closed() => {
                self.hub.handle_line(session, &line);
                Ok(())
            }
            _ => Err(io::Error::new(io::ErrorKind::BrokenPipe, "session closed")),
        }
    }

    fn recv(&mut self) -> io::Result<WireMessage> {
        match self.rx.try_recv() {
            Ok(Outbound::Line(line)) => decode(&line),
            _ => Err(io::Error::new(io::ErrorKind::UnexpectedEof, "no message queued")),
        }
    }
}
