//! In-process duplex byte pipe for running both protocol roles on threads.
//!
//! A read that would block while the other end is also blocked on an empty
//! buffer fails with `TimedOut` on both ends instead of hanging. That is the
//! signature of a corrupted length header that makes each side wait for the
//! other.

use std::collections::VecDeque;
use std::io::{self, Read, Write};
use std::sync::{Arc, Condvar, Mutex};

/// XOR one byte of the stream written by end `from` at byte `offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tamper {
    pub from: usize,
    pub offset: usize,
    pub xor: u8,
}

#[derive(Default)]
struct State {
    /// `inbox[i]` holds bytes waiting to be read by end `i`.
    inbox: [VecDeque<u8>; 2],
    written: [Vec<u8>; 2],
    waiting: [bool; 2],
    closed: [bool; 2],
    stalled: bool,
    tamper: Option<Tamper>,
}

struct Shared {
    state: Mutex<State>,
    wake: Condvar,
}

pub struct PipeEnd {
    shared: Arc<Shared>,
    id: usize,
}

/// Read-only view of everything written through the pipe.
#[derive(Clone)]
pub struct PipeLog {
    shared: Arc<Shared>,
}

impl PipeLog {
    /// Bytes written by end `id`, after tampering.
    pub fn written(&self, id: usize) -> Vec<u8> {
        self.shared.state.lock().unwrap().written[id].clone()
    }
}

pub fn duplex(tamper: Option<Tamper>) -> (PipeEnd, PipeEnd, PipeLog) {
    let shared = Arc::new(Shared {
        state: Mutex::new(State {
            tamper,
            ..State::default()
        }),
        wake: Condvar::new(),
    });
    (
        PipeEnd {
            shared: shared.clone(),
            id: 0,
        },
        PipeEnd {
            shared: shared.clone(),
            id: 1,
        },
        PipeLog { shared },
    )
}

impl Read for PipeEnd {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        if buf.is_empty() {
            return Ok(0);
        }
        let me = self.id;
        let peer = 1 - me;
        let mut st = self.shared.state.lock().unwrap();
        loop {
            if !st.inbox[me].is_empty() {
                let n = buf.len().min(st.inbox[me].len());
                for (slot, b) in buf.iter_mut().zip(st.inbox[me].drain(..n)) {
                    *slot = b;
                }
                return Ok(n);
            }
            if st.stalled {
                return Err(io::Error::new(io::ErrorKind::TimedOut, "both ends waiting"));
            }
            if st.closed[peer] {
                return Ok(0);
            }
            if st.waiting[peer] && st.inbox[peer].is_empty() {
                st.stalled = true;
                self.shared.wake.notify_all();
                return Err(io::Error::new(io::ErrorKind::TimedOut, "both ends waiting"));
            }
            st.waiting[me] = true;
            st = self.shared.wake.wait(st).unwrap();
            st.waiting[me] = false;
        }
    }
}

impl Write for PipeEnd {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let me = self.id;
        let mut st = self.shared.state.lock().unwrap();
        if st.closed[1 - me] {
            return Err(io::Error::new(io::ErrorKind::BrokenPipe, "peer closed"));
        }
        let start = st.written[me].len();
        let mut bytes = buf.to_vec();
        if let Some(t) = st.tamper {
            if t.from == me && (start..start + bytes.len()).contains(&t.offset) {
                bytes[t.offset - start] ^= t.xor;
            }
        }
        st.written[me].extend_from_slice(&bytes);
        st.inbox[1 - me].extend(bytes);
        self.shared.wake.notify_all();
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

impl Drop for PipeEnd {
    fn drop(&mut self) {
        if let Ok(mut st) = self.shared.state.lock() {
            st.closed[self.id] = true;
        }
        self.shared.wake.notify_all();
    }
}
