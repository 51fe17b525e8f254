//! Reference networks shipped with the crate.

use crate::netmodel::{parse_network, Network};

pub const EXAMPLE1: &str = include_str!("../fixtures/example1.crn");
pub const EXAMPLE2: &str = include_str!("../fixtures/example2.crn");
pub const EXAMPLE3: &str = include_str!("../fixtures/example3.crn");
pub const REVERSIBLE: &str = include_str!("../fixtures/reversible.crn");

pub fn example1() -> Network {
    parse_network(EXAMPLE1).expect("bundled fixture parses")
}

pub fn example2() -> Network {
    parse_network(EXAMPLE2).expect("bundled fixture parses")
}

pub fn example3() -> Network {
    parse_network(EXAMPLE3).expect("bundled fixture parses")
}

/// `A <-> B` with unit rates.
pub fn reversible() -> Network {
    parse_network(REVERSIBLE).expect("bundled fixture parses")
}
