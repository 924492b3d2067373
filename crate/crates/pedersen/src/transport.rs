//! Byte-stream transports for the commit/open protocol.
//!
//! A session is one frame sequence over one stream: SETUP, COMMIT, OPEN,
//! RESULT. Both parties read frames header-first, so a bad tag or length is
//! rejected before any payload is buffered.

use std::fmt;
use std::io::{self, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::mpsc;
use std::thread;

use pedersen_core::coins::SeededCoins;
use pedersen_core::protocol::{
    frame_encode, parse_header, payload_decode, Committer, ProtocolError, ProtocolMessage, Receiver, HEADER_LEN,
};
use pedersen_core::{Group, Scalar};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("peer closed the connection")]
    Closed,
    #[error("i/o: {0}")]
    Io(io::Error),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

impl From<io::Error> for TransportError {
    fn from(e: io::Error) -> Self {
        match e.kind() {
            io::ErrorKind::UnexpectedEof | io::ErrorKind::BrokenPipe | io::ErrorKind::ConnectionReset => {
                TransportError::Closed
            }
            _ => TransportError::Io(e),
        }
    }
}

/// A failed session, with the local party's state when it stopped.
#[derive(Debug, Error)]
#[error("{role} failed in state {state}: {error}")]
pub struct SessionError {
    pub role: &'static str,
    pub state: &'static str,
    pub error: TransportError,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Sent,
    Received,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub direction: Direction,
    pub bytes: Vec<u8>,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.direction {
            Direction::Sent => "->",
            Direction::Received => "<-",
        };
        let (head, payload) = self.bytes.split_at(HEADER_LEN.min(self.bytes.len()));
        let tag = pedersen_core::protocol::tag_name(head[0]);
        write!(f, "{arrow} {tag:<6} {} {}", hex::encode(head), hex::encode(payload))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionReport {
    pub accepted: bool,
    pub frames: Vec<Frame>,
}

impl SessionReport {
    /// Frame bytes in wire order, without direction.
    pub fn wire(&self) -> Vec<&[u8]> {
        self.frames.iter().map(|f| f.bytes.as_slice()).collect()
    }
}

pub fn write_frame<W: Write>(w: &mut W, group: &Group, msg: &ProtocolMessage) -> Result<Vec<u8>, TransportError> {
    let bytes = frame_encode(group, msg);
    w.write_all(&bytes)?;
    w.flush()?;
    Ok(bytes)
}

/// Reads one frame; returns the message and the raw bytes.
pub fn read_frame<R: Read>(r: &mut R, group: &Group) -> Result<(ProtocolMessage, Vec<u8>), TransportError> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)?;
    let (tag, len) = parse_header(group, &header)?;
    let mut bytes = vec![0u8; HEADER_LEN + len];
    bytes[..HEADER_LEN].copy_from_slice(&header);
    r.read_exact(&mut bytes[HEADER_LEN..])?;
    let msg = payload_decode(group, tag, &bytes[HEADER_LEN..])?;
    Ok((msg, bytes))
}

/// Coins for both parties of a session: the receiver draws from stream 0 of
/// `seed`, the committer from stream 1.
pub fn party_coins(seed: u64) -> (SeededCoins, SeededCoins) {
    (SeededCoins::with_stream(seed, 0), SeededCoins::with_stream(seed, 1))
}

/// How the committer behaves. The default is honest.
#[derive(Clone, Debug)]
pub struct CommitterOptions {
    pub m: Scalar,
    /// Reveal this message instead of the committed one.
    pub open_as: Option<Scalar>,
    /// Send OPEN without sending COMMIT first.
    pub skip_commit: bool,
    /// Flip this bit of the OPEN payload (bit 0 is the low bit of the
    /// first byte).
    pub flip_open_bit: Option<usize>,
}

impl CommitterOptions {
    pub fn honest(m: Scalar) -> Self {
        CommitterOptions { m, open_as: None, skip_commit: false, flip_open_bit: None }
    }
}

struct Log<'a, S> {
    stream: &'a mut S,
    group: &'a Group,
    frames: Vec<Frame>,
}

impl<S: Read + Write> Log<'_, S> {
    fn send(&mut self, msg: &ProtocolMessage) -> Result<(), TransportError> {
        let bytes = write_frame(self.stream, self.group, msg)?;
        self.frames.push(Frame { direction: Direction::Sent, bytes });
        Ok(())
    }

    fn send_raw(&mut self, bytes: Vec<u8>) -> Result<(), TransportError> {
        self.stream.write_all(&bytes)?;
        self.stream.flush()?;
        self.frames.push(Frame { direction: Direction::Sent, bytes });
        Ok(())
    }

    fn recv(&mut self) -> Result<ProtocolMessage, TransportError> {
        let (msg, bytes) = read_frame(self.stream, self.group)?;
        self.frames.push(Frame { direction: Direction::Received, bytes });
        Ok(msg)
    }
}

pub fn run_receiver<S: Read + Write>(
    stream: &mut S,
    group: &Group,
    coins: &mut SeededCoins,
) -> Result<SessionReport, SessionError> {
    let mut party = Receiver::new(group.clone());
    let mut log = Log { stream, group, frames: Vec::new() };
    let mut step = || -> Result<bool, TransportError> {
        let setup = party.setup(coins)?;
        log.send(&setup)?;
        loop {
            let msg = log.recv()?;
            if let Some(reply) = party.receive(&msg)? {
                log.send(&reply)?;
                return Ok(matches!(reply, ProtocolMessage::Result { accept: true }));
            }
        }
    };
    match step() {
        Ok(accepted) => Ok(SessionReport { accepted, frames: log.frames }),
        Err(error) => Err(SessionError { role: "receiver", state: party.state().name(), error }),
    }
}

pub fn run_committer<S: Read + Write>(
    stream: &mut S,
    group: &Group,
    coins: &mut SeededCoins,
    opts: &CommitterOptions,
) -> Result<SessionReport, SessionError> {
    let mut party = Committer::new(group.clone());
    let mut log = Log { stream, group, frames: Vec::new() };
    let mut step = || -> Result<bool, TransportError> {
        let h = match log.recv()? {
            ProtocolMessage::Setup { h } => h,
            other => return Err(ProtocolError::WrongState { state: party.state().name(), event: other.kind() }.into()),
        };
        let commit = party.commit(h.value(), &opts.m, coins)?;
        if !opts.skip_commit {
            log.send(&commit)?;
        }
        let mut open = party.open()?;
        if let (Some(m), ProtocolMessage::Open { d, .. }) = (&opts.open_as, &open) {
            open = ProtocolMessage::Open { m: m.clone(), d: d.clone() };
        }
        let mut bytes = frame_encode(group, &open);
        if let Some(bit) = opts.flip_open_bit {
            let payload = &mut bytes[HEADER_LEN..];
            let bit = bit % (payload.len() * 8);
            payload[bit / 8] ^= 1 << (bit % 8);
        }
        log.send_raw(bytes)?;
        let verdict = log.recv()?;
        Ok(party.finish(&verdict)?)
    };
    match step() {
        Ok(accepted) => Ok(SessionReport { accepted, frames: log.frames }),
        Err(error) => Err(SessionError { role: "committer", state: party.state().name(), error }),
    }
}

/// One end of an in-memory duplex byte stream.
pub struct MemoryStream {
    tx: mpsc::Sender<Vec<u8>>,
    rx: mpsc::Receiver<Vec<u8>>,
    pending: Vec<u8>,
    offset: usize,
}

/// Two connected in-memory streams.
pub fn memory_pair() -> (MemoryStream, MemoryStream) {
    let (a_tx, b_rx) = mpsc::channel();
    let (b_tx, a_rx) = mpsc::channel();
    let end = |tx, rx| MemoryStream { tx, rx, pending: Vec::new(), offset: 0 };
    (end(a_tx, a_rx), end(b_tx, b_rx))
}

impl Read for MemoryStream {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        while self.offset == self.pending.len() {
            match self.rx.recv() {
                Ok(chunk) => {
                    self.pending = chunk;
                    self.offset = 0;
                }
                Err(_) => return Ok(0),
            }
        }
        let n = buf.len().min(self.pending.len() - self.offset);
        buf[..n].copy_from_slice(&self.pending[self.offset..self.offset + n]);
        self.offset += n;
        Ok(n)
    }
}

impl Write for MemoryStream {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.tx.send(buf.to_vec()).map_err(|_| io::Error::from(io::ErrorKind::BrokenPipe))?;
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

pub type SessionResult = Result<SessionReport, SessionError>;

/// Runs both parties over an in-memory pair; returns `(receiver,
/// committer)` results.
pub fn run_memory(group: &Group, seed: u64, opts: &CommitterOptions) -> (SessionResult, SessionResult) {
    let (mut r_end, mut c_end) = memory_pair();
    let (mut r_coins, mut c_coins) = party_coins(seed);
    thread::scope(|s| {
        let receiver = s.spawn(move || run_receiver(&mut r_end, group, &mut r_coins));
        let committer = run_committer(&mut c_end, group, &mut c_coins, opts);
        drop(c_end);
        (receiver.join().expect("receiver thread"), committer)
    })
}

/// Accepts `sessions` connections and runs a receiver on each, concurrently.
/// Connection `k` draws from stream `2k` of `seed`, so the first session
/// matches [`party_coins`].
pub fn serve(listener: &TcpListener, group: &Group, seed: u64, sessions: usize) -> io::Result<Vec<SessionResult>> {
    thread::scope(|s| {
        let mut handles = Vec::with_capacity(sessions);
        for k in 0..sessions {
            let (mut stream, _) = listener.accept()?;
            handles.push(s.spawn(move || {
                let mut coins = SeededCoins::with_stream(seed, 2 * k as u64);
                run_receiver(&mut stream, group, &mut coins)
            }));
        }
        Ok(handles.into_iter().map(|h| h.join().expect("session thread")).collect())
    })
}

/// Connects to a receiver and runs one committer session.
pub fn connect_and_commit(
    addr: SocketAddr,
    group: &Group,
    seed: u64,
    opts: &CommitterOptions,
) -> io::Result<SessionResult> {
    let mut stream = TcpStream::connect(addr)?;
    stream.set_nodelay(true)?;
    let (_, mut coins) = party_coins(seed);
    Ok(run_committer(&mut stream, group, &mut coins, opts))
}

/// Runs one session over loopback TCP; returns `(receiver, committer)`.
pub fn run_tcp(group: &Group, seed: u64, opts: &CommitterOptions) -> io::Result<(SessionResult, SessionResult)> {
    let listener = TcpListener::bind(("127.0.0.1", 0))?;
    let addr = listener.local_addr()?;
    thread::scope(|s| {
        let server = s.spawn(|| serve(&listener, group, seed, 1));
        let committer = connect_and_commit(addr, group, seed, opts)?;
        let mut receiver = server.join().expect("server thread")?;
        Ok((receiver.remove(0), committer))
    })
}
