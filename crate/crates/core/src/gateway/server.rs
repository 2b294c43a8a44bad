use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{Shutdown, SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{mpsc, Arc};
use std::thread::{self, JoinHandle};

use super::hub::{Flow, GatewayConfig, Hub, Outbound, Outbox, MAX_LINE_BYTES};

pub struct ServerHandle {
    addr: SocketAddr,
    hub: Arc<Hub>,
    stop: Arc<AtomicBool>,
    thread: Option<JoinHandle<()>>,
}

impl ServerHandle {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn hub(&self) -> &Arc<Hub> {
        &self.hub
    }

    /// Stops accepting connections. Open sessions finish on their own.
    pub fn shutdown(mut self) {
        self.stop_listener();
    }

    /// Blocks until the accept loop ends.
    pub fn wait(mut self) {
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }

    fn stop_listener(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        let _ = TcpStream::connect(self.addr);
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        if self.thread.is_some() {
            self.stop_listener();
        }
    }
}

/// Binds `bind` and serves sessions, one reader and one writer thread each.
pub fn serve(bind: &str, config: GatewayConfig) -> io::Result<ServerHandle> {
    let listener = TcpListener::bind(bind)?;
    let addr = listener.local_addr()?;
    let hub = Arc::new(Hub::new(config));
    let stop = Arc::new(AtomicBool::new(false));
    let thread = {
        let hub = hub.clone();
        let stop = stop.clone();
        thread::Builder::new().name("gateway-accept".into()).spawn(move || {
            for stream in listener.incoming() {
                if stop.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(stream) = stream else { continue };
                let hub = hub.clone();
                let _ = thread::Builder::new().name("gateway-session".into()).spawn(move || run_connection(&hub, stream));
            }
        })?
    };
    Ok(ServerHandle { addr, hub, stop, thread: Some(thread) })
}

fn run_writer(mut stream: TcpStream, rx: mpsc::Receiver<Outbound>) {
    for out in rx {
        match out {
            Outbound::Line(line) => {
                if stream.write_all(line.as_bytes()).and_then(|_| stream.write_all(b"\n")).is_err() {
                    break;
                }
            }
            Outbound::Close => break,
        }
    }
    let _ = stream.flush();
    let _ = stream.shutdown(Shutdown::Both);
}

fn run_connection(hub: &Hub, stream: TcpStream) {
    let _ = stream.set_nodelay(true);
    let Ok(write_half) = stream.try_clone() else { return };
    let (tx, rx) = mpsc::channel();
    let writer = thread::spawn(move || run_writer(write_half, rx));
    let outbox = Outbox::new(tx);
    if let Some(mut session) = hub.open_session(outbox.clone()) {
        let mut reader = BufReader::new(stream);
        let mut buf = Vec::new();
        loop {
            buf.clear();
            match (&mut reader).take(MAX_LINE_BYTES as u64 + 1).read_until(b'\n', &mut buf) {
                Ok(0) | Err(_) => break,
                Ok(_) => {}
            }
            if buf.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            if hub.handle_raw(&mut session, &buf) == Flow::Close {
                break;
            }
        }
        hub.disconnect(&mut session);
    }
    outbox.close();
    drop(outbox);
    let _ = writer.join();
}
