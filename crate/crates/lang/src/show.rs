//! Human-readable text of abstract values. States print in the form
//! accepted by the `--state` parsers.

use std::fmt;

use crate::domain::{AHeap, AIo, AState, AVal, Abs, Bound, Itv, LocSet, Stream, B4};

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Fin(n) => write!(f, "{n}"),
            Bound::PosInf => f.write_str("+inf"),
        }
    }
}

impl fmt::Display for Itv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Itv::Bot => f.write_str("bot"),
            Itv::Range(Bound::Fin(a), Bound::Fin(b)) if a == b => write!(f, "{a}"),
            Itv::Range(lo, hi) => write!(f, "[{lo};{hi}]"),
        }
    }
}

impl fmt::Display for B4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            B4::Bot => "bot",
            B4::Tt => "true",
            B4::Ff => "false",
            B4::Top => "bool",
        })
    }
}

impl fmt::Display for LocSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocSet::Top => f.write_str("@*"),
            LocSet::Set(s) => {
                let parts: Vec<String> = s.iter().map(|l| format!("@{l}")).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

impl fmt::Display for AVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.int.is_bot() {
            parts.push(self.int.to_string());
        }
        if self.bool != B4::Bot {
            parts.push(self.bool.to_string());
        }
        if !self.loc.is_bot() {
            parts.push(self.loc.to_string());
        }
        if parts.is_empty() {
            return f.write_str("bot");
        }
        f.write_str(&parts.join(" | "))
    }
}

impl fmt::Display for AState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AState::Bot => f.write_str("bot"),
            AState::Map(m) => {
                let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stream::Bot => f.write_str("bot"),
            Stream::Of(v) => write!(f, "[{v}]*"),
        }
    }
}

impl fmt::Display for AHeap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AHeap::Bot => f.write_str("bot"),
            AHeap::Top => f.write_str("top"),
            AHeap::Heap { next, cells } => {
                let parts: Vec<String> = cells.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                write!(f, "<{next}|{}>", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for AIo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(in={}, out={}, {}, heap={})",
            self.input, self.output, self.state, self.heap
        )
    }
}

impl fmt::Display for Abs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Abs::Int(i) => write!(f, "{i}"),
            Abs::Bool(b) => write!(f, "{b}"),
            Abs::Val(v) => write!(f, "{v}"),
            Abs::State(s) => write!(f, "{s}"),
            Abs::Loc(l) => write!(f, "{l}"),
            Abs::In(s) | Abs::Out(s) => write!(f, "{s}"),
            Abs::Heap(h) => write!(f, "{h}"),
            Abs::Io(io) => write!(f, "{io}"),
            Abs::ValIo(v, io) => write!(f, "({v}, {io})"),
            Abs::ExcIo(b, io) => {
                let tag = match b {
                    B4::Bot => "bot",
                    B4::Tt => "ok",
                    B4::Ff => "exception",
                    B4::Top => "ok|exception",
                };
                write!(f, "({tag}, {io})")
            }
        }
    }
}
