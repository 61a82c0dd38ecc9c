//! The example automata shipped in `fixtures/`, parsed.

use crate::format::{parse, AutomatonFile};
use crate::gpta::Gpta;
use crate::parikh_string::Pa;
use crate::ptar::Ptar;
use crate::twocm::TwoCM;

pub const L_AB: &str = include_str!("../fixtures/l_ab.pta");
pub const L_GAMMA_GAMMA: &str = include_str!("../fixtures/l_gammagamma.gpta");
pub const L_LIN: &str = include_str!("../fixtures/l_lin.ptar");
pub const L_3: &str = include_str!("../fixtures/l_3.pta");
pub const SPINAL: &str = include_str!("../fixtures/spinal.ptar");
pub const INC_DEC: &str = include_str!("../fixtures/incdec.2cm");
pub const INC_ONLY: &str = include_str!("../fixtures/inconly.2cm");
pub const NO_FINALS: &str = include_str!("../fixtures/no_finals.pa");
pub const BALANCED: &str = include_str!("../fixtures/balanced.pa");

/// Every fixture with its file name.
pub const ALL: [(&str, &str); 9] = [
    ("l_ab.pta", L_AB),
    ("l_gammagamma.gpta", L_GAMMA_GAMMA),
    ("l_lin.ptar", L_LIN),
    ("l_3.pta", L_3),
    ("spinal.ptar", SPINAL),
    ("incdec.2cm", INC_DEC),
    ("inconly.2cm", INC_ONLY),
    ("no_finals.pa", NO_FINALS),
    ("balanced.pa", BALANCED),
];

fn load(text: &str) -> AutomatonFile {
    parse(text).expect("shipped fixtures parse")
}

fn ptar(text: &str) -> Ptar {
    load(text).as_ptar().expect("a PTA/PTAR fixture").clone()
}

fn pa(text: &str) -> Pa {
    match load(text) {
        AutomatonFile::Pa(a) => a,
        _ => unreachable!("a PA fixture"),
    }
}

fn machine(text: &str) -> TwoCM {
    match load(text) {
        AutomatonFile::TwoCm(m) => m,
        _ => unreachable!("a 2CM fixture"),
    }
}

pub fn l_ab() -> Ptar {
    ptar(L_AB)
}

pub fn l_gamma_gamma() -> Gpta {
    match load(L_GAMMA_GAMMA) {
        AutomatonFile::Gpta(g) => g,
        _ => unreachable!("a GPTA fixture"),
    }
}

pub fn l_lin() -> Ptar {
    ptar(L_LIN)
}

pub fn l_3() -> Ptar {
    ptar(L_3)
}

pub fn spinal() -> Ptar {
    ptar(SPINAL)
}

pub fn inc_dec() -> TwoCM {
    machine(INC_DEC)
}

pub fn inc_only() -> TwoCM {
    machine(INC_ONLY)
}

pub fn no_finals() -> Pa {
    pa(NO_FINALS)
}

pub fn balanced() -> Pa {
    pa(BALANCED)
}
