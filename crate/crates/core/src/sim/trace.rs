use std::fmt;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Collision,
    SicSuccess,
    PeDrop,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Success => "success",
            Outcome::Collision => "collision",
            Outcome::SicSuccess => "sic_success",
            Outcome::PeDrop => "pe_drop",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEvent {
    pub cycle: u32,
    pub slot: usize,
    pub preamble: usize,
    pub device: u32,
    pub outcome: Outcome,
}

/// Writes `cycle,slot,preamble,device,outcome` lines.
pub fn write_trace<W: Write>(out: &mut W, events: &[TraceEvent]) -> io::Result<()> {
    for e in events {
        writeln!(out, "{},{},{},{},{}", e.cycle, e.slot, e.preamble, e.device, e.outcome)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let mut buf = Vec::new();
        let ev = TraceEvent { cycle: 2, slot: 5, preamble: 1, device: 9, outcome: Outcome::SicSuccess };
        write_trace(&mut buf, &[ev, TraceEvent { outcome: Outcome::PeDrop, ..ev }]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "2,5,1,9,sic_success\n2,5,1,9,pe_drop\n");
    }
}
