//! Binary statevector dumps: a 16-byte header (`QMHSV1`, qubit count as
//! little-endian `u16`, layout hash as little-endian `u64`) followed by
//! interleaved little-endian `f64` real and imaginary parts.

use crate::{QuantumState, Result, SimError, Statevector, C64};
use std::io::{Read, Write};

const MAGIC: &[u8; 6] = b"QMHSV1";

/// Writes `state` in the dump format.
pub fn write_dump<W: Write>(state: &Statevector, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(state.num_qubits() as u16).to_le_bytes())?;
    w.write_all(&state.layout().hash64().to_le_bytes())?;
    let mut buf = Vec::with_capacity(1 << 16);
    for chunk in state.amplitudes().chunks(4096) {
        buf.clear();
        for a in chunk {
            buf.extend_from_slice(&a.re.to_le_bytes());
            buf.extend_from_slice(&a.im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

/// Reads a dump into a statevector on `layout`, checking qubit count and hash.
pub fn read_dump<R: Read>(layout: std::sync::Arc<crate::RegisterLayout>, mut r: R) -> Result<Statevector> {
    let mut head = [0u8; 16];
    r.read_exact(&mut head)?;
    if &head[..6] != MAGIC {
        return Err(SimError::Dump("bad magic".into()));
    }
    let n = u16::from_le_bytes([head[6], head[7]]) as usize;
    let hash = u64::from_le_bytes(head[8..16].try_into().expect("8 bytes"));
    if n != layout.num_qubits() || hash != layout.hash64() {
        return Err(SimError::Dump("layout mismatch".into()));
    }
    let mut bytes = vec![0u8; 16 << n];
    r.read_exact(&mut bytes)?;
    let amps = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            C64::new(re, im)
        })
        .collect();
    Statevector::from_amplitudes(layout, amps)
}
