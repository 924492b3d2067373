//! Two-party commit/open protocol: wire format and state machines.
//!
//! ```text
//! receiver                         committer
//!   setup: h = g^x     SETUP(h)  ->
//!                   <- COMMIT(c)     c = g^d h^m
//!                   <- OPEN(m, d)
//!   verify            RESULT(ok) ->
//! ```
//!
//! Every frame is `tag (1 byte) || payload length (u32, big-endian) ||
//! payload`, with payload fields in the fixed widths of the agreed group.

use alloc::vec::Vec;

use num_bigint::BigUint;
use thiserror::Error;

use crate::coins::{Coins, TapeError};
use crate::group::{Group, GroupElement, GroupError, Scalar};
use crate::pedersen::{CommitmentScheme, Pedersen};

pub const TAG_SETUP: u8 = 0x01;
pub const TAG_COMMIT: u8 = 0x02;
pub const TAG_OPEN: u8 = 0x03;
pub const TAG_RESULT: u8 = 0x04;

pub const HEADER_LEN: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("unknown frame tag {0:#04x}")]
    BadTag(u8),
    #[error("bad frame length: expected {expected}, got {actual}")]
    BadLength { expected: usize, actual: usize },
    #[error("payload value out of range")]
    DecodeOutOfRange,
    #[error("payload value not in the order-q subgroup")]
    DecodeNotInSubgroup,
    #[error("commitment key is not in the order-q subgroup")]
    NotInSubgroup,
    #[error("{event} not allowed in state {state}")]
    WrongState { state: &'static str, event: &'static str },
    #[error(transparent)]
    Tape(#[from] TapeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProtocolMessage {
    Setup { h: GroupElement },
    Commit { c: GroupElement },
    Open { m: Scalar, d: Scalar },
    Result { accept: bool },
}

impl ProtocolMessage {
    pub fn tag(&self) -> u8 {
        match self {
            ProtocolMessage::Setup { .. } => TAG_SETUP,
            ProtocolMessage::Commit { .. } => TAG_COMMIT,
            ProtocolMessage::Open { .. } => TAG_OPEN,
            ProtocolMessage::Result { .. } => TAG_RESULT,
        }
    }

    pub fn kind(&self) -> &'static str {
        tag_name(self.tag())
    }
}

pub fn tag_name(tag: u8) -> &'static str {
    match tag {
        TAG_SETUP => "SETUP",
        TAG_COMMIT => "COMMIT",
        TAG_OPEN => "OPEN",
        TAG_RESULT => "RESULT",
        _ => "UNKNOWN",
    }
}

/// Payload length the agreed group fixes for `tag`.
pub fn payload_len(group: &Group, tag: u8) -> Result<usize, ProtocolError> {
    match tag {
        TAG_SETUP | TAG_COMMIT => Ok(group.element_width()),
        TAG_OPEN => Ok(2 * group.scalar_width()),
        TAG_RESULT => Ok(1),
        other => Err(ProtocolError::BadTag(other)),
    }
}

/// Validates a frame header and returns `(tag, payload length)`.
pub fn parse_header(group: &Group, header: &[u8; HEADER_LEN]) -> Result<(u8, usize), ProtocolError> {
    let tag = header[0];
    let expected = payload_len(group, tag)?;
    let declared = u32::from_be_bytes([header[1], header[2], header[3], header[4]]) as usize;
    if declared != expected {
        return Err(ProtocolError::BadLength { expected, actual: declared });
    }
    Ok((tag, expected))
}

pub fn frame_encode(group: &Group, msg: &ProtocolMessage) -> Vec<u8> {
    let payload = match msg {
        ProtocolMessage::Setup { h } => group.encode_element(h),
        ProtocolMessage::Commit { c } => group.encode_element(c),
        ProtocolMessage::Open { m, d } => {
            let mut p = group.encode_scalar(m);
            p.extend(group.encode_scalar(d));
            p
        }
        ProtocolMessage::Result { accept } => alloc::vec![*accept as u8],
    };
    let mut frame = Vec::with_capacity(HEADER_LEN + payload.len());
    frame.push(msg.tag());
    frame.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    frame.extend(payload);
    frame
}

fn map_decode(e: GroupError) -> ProtocolError {
    match e {
        GroupError::DecodeNotInSubgroup => ProtocolError::DecodeNotInSubgroup,
        _ => ProtocolError::DecodeOutOfRange,
    }
}

/// Decodes the payload of a frame whose header already passed
/// [`parse_header`].
pub fn payload_decode(group: &Group, tag: u8, payload: &[u8]) -> Result<ProtocolMessage, ProtocolError> {
    let expected = payload_len(group, tag)?;
    if payload.len() != expected {
        return Err(ProtocolError::BadLength { expected, actual: payload.len() });
    }
    Ok(match tag {
        TAG_SETUP => ProtocolMessage::Setup { h: group.decode_element(payload).map_err(map_decode)? },
        TAG_COMMIT => ProtocolMessage::Commit { c: group.decode_element(payload).map_err(map_decode)? },
        TAG_OPEN => {
            let (m, d) = payload.split_at(group.scalar_width());
            ProtocolMessage::Open {
                m: group.decode_scalar(m).map_err(map_decode)?,
                d: group.decode_scalar(d).map_err(map_decode)?,
            }
        }
        TAG_RESULT => match payload[0] {
            0 => ProtocolMessage::Result { accept: false },
            1 => ProtocolMessage::Result { accept: true },
            _ => return Err(ProtocolError::DecodeOutOfRange),
        },
        other => return Err(ProtocolError::BadTag(other)),
    })
}

/// Decodes exactly one frame.
pub fn frame_decode(group: &Group, bytes: &[u8]) -> Result<ProtocolMessage, ProtocolError> {
    let Some(header) = bytes.first_chunk::<HEADER_LEN>() else {
        return Err(ProtocolError::BadLength { expected: HEADER_LEN, actual: bytes.len() });
    };
    let (tag, len) = parse_header(group, header)?;
    if bytes.len() != HEADER_LEN + len {
        return Err(ProtocolError::BadLength { expected: HEADER_LEN + len, actual: bytes.len() });
    }
    payload_decode(group, tag, &bytes[HEADER_LEN..])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommitterState {
    Init,
    Committed { h: GroupElement, m: Scalar, d: Scalar },
    Opened,
    Done { accepted: bool },
}

impl CommitterState {
    pub fn name(&self) -> &'static str {
        match self {
            CommitterState::Init => "Init",
            CommitterState::Committed { .. } => "Committed",
            CommitterState::Opened => "Opened",
            CommitterState::Done { .. } => "Done",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReceiverState {
    Init,
    Setup { h: GroupElement },
    GotCommit { h: GroupElement, c: GroupElement },
    Verified { accept: bool },
}

impl ReceiverState {
    pub fn name(&self) -> &'static str {
        match self {
            ReceiverState::Init => "Init",
            ReceiverState::Setup { .. } => "Setup",
            ReceiverState::GotCommit { .. } => "GotCommit",
            ReceiverState::Verified { .. } => "Verified",
        }
    }
}

/// The committing party. A failed call leaves the state unchanged.
#[derive(Clone, Debug)]
pub struct Committer {
    scheme: Pedersen,
    state: CommitterState,
}

impl Committer {
    pub fn new(group: Group) -> Self {
        Committer { scheme: Pedersen::new(group), state: CommitterState::Init }
    }

    pub fn state(&self) -> &CommitterState {
        &self.state
    }

    pub fn group(&self) -> &Group {
        self.scheme.group()
    }

    fn wrong(&self, event: &'static str) -> ProtocolError {
        ProtocolError::WrongState { state: self.state.name(), event }
    }

    /// Commits to `m` under the receiver's key `h`, given as a raw integer
    /// so that keys outside the subgroup are caught here.
    pub fn commit(&mut self, h: &BigUint, m: &Scalar, coins: &mut dyn Coins) -> Result<ProtocolMessage, ProtocolError> {
        if self.state != CommitterState::Init {
            return Err(self.wrong("commit"));
        }
        let h = self.group().element(h.clone()).map_err(|_| ProtocolError::NotInSubgroup)?;
        let pair = self.scheme.commit(&h, m, coins)?;
        self.state = CommitterState::Committed { h, m: m.clone(), d: pair.d };
        Ok(ProtocolMessage::Commit { c: pair.c })
    }

    pub fn open(&mut self) -> Result<ProtocolMessage, ProtocolError> {
        let CommitterState::Committed { m, d, .. } = &self.state else {
            return Err(self.wrong("open"));
        };
        let msg = ProtocolMessage::Open { m: m.clone(), d: d.clone() };
        self.state = CommitterState::Opened;
        Ok(msg)
    }

    /// Records the receiver's verdict.
    pub fn finish(&mut self, msg: &ProtocolMessage) -> Result<bool, ProtocolError> {
        match (&self.state, msg) {
            (CommitterState::Opened, ProtocolMessage::Result { accept }) => {
                self.state = CommitterState::Done { accepted: *accept };
                Ok(*accept)
            }
            _ => Err(self.wrong(msg.kind())),
        }
    }
}

/// The receiving party. A failed call leaves the state unchanged.
#[derive(Clone, Debug)]
pub struct Receiver {
    scheme: Pedersen,
    state: ReceiverState,
    #[cfg(feature = "trapdoor")]
    trapdoor: Option<Scalar>,
}

impl Receiver {
    pub fn new(group: Group) -> Self {
        Receiver {
            scheme: Pedersen::new(group),
            state: ReceiverState::Init,
            #[cfg(feature = "trapdoor")]
            trapdoor: None,
        }
    }

    pub fn state(&self) -> &ReceiverState {
        &self.state
    }

    pub fn group(&self) -> &Group {
        self.scheme.group()
    }

    /// `x` with `h = g^x`, kept only in trapdoor builds.
    #[cfg(feature = "trapdoor")]
    pub fn trapdoor(&self) -> Option<&Scalar> {
        self.trapdoor.as_ref()
    }

    fn wrong(&self, event: &'static str) -> ProtocolError {
        ProtocolError::WrongState { state: self.state.name(), event }
    }

    /// Samples the commitment key and announces it.
    pub fn setup(&mut self, coins: &mut dyn Coins) -> Result<ProtocolMessage, ProtocolError> {
        if self.state != ReceiverState::Init {
            return Err(self.wrong("setup"));
        }
        #[cfg(feature = "trapdoor")]
        let h = {
            let (h, x) = self.scheme.gen_with_trapdoor(coins)?;
            self.trapdoor = Some(x);
            h
        };
        #[cfg(not(feature = "trapdoor"))]
        let h = self.scheme.gen(coins)?;
        self.state = ReceiverState::Setup { h: h.clone() };
        Ok(ProtocolMessage::Setup { h })
    }

    /// Feeds one message from the committer; returns the RESULT reply once
    /// an opening has been checked.
    pub fn receive(&mut self, msg: &ProtocolMessage) -> Result<Option<ProtocolMessage>, ProtocolError> {
        match msg {
            ProtocolMessage::Commit { c } => {
                let ReceiverState::Setup { h } = &self.state else {
                    return Err(self.wrong("COMMIT"));
                };
                self.state = ReceiverState::GotCommit { h: h.clone(), c: c.clone() };
                Ok(None)
            }
            ProtocolMessage::Open { .. } => self.verify(msg).map(Some),
            other => Err(self.wrong(other.kind())),
        }
    }

    /// Checks an OPEN against the stored commitment.
    pub fn verify(&mut self, open: &ProtocolMessage) -> Result<ProtocolMessage, ProtocolError> {
        let (ReceiverState::GotCommit { h, c }, ProtocolMessage::Open { m, d }) = (&self.state, open) else {
            return Err(self.wrong(open.kind()));
        };
        let accept = self.scheme.verify(h, m, c, d);
        self.state = ReceiverState::Verified { accept };
        Ok(ProtocolMessage::Result { accept })
    }

    /// Decodes a raw frame and feeds it to [`Receiver::receive`].
    pub fn receive_frame(&mut self, frame: &[u8]) -> Result<Option<ProtocolMessage>, ProtocolError> {
        let msg = frame_decode(self.group(), frame)?;
        self.receive(&msg)
    }
}
