//! Built-in theories used by the test suites and the CLI.

use crate::theory::{parse_theory, Theory};

pub const OBJECTS: &str = include_str!("../theories/objects.gth");
pub const POINTED: &str = include_str!("../theories/pointed.gth");
pub const SYMMETRIC_GRAPH: &str = include_str!("../theories/symgraph.gth");
pub const INHABITED: &str = include_str!("../theories/inhabited.gth");
pub const SPAN: &str = include_str!("../theories/span.gth");

fn load(text: &str) -> Theory {
    parse_theory(text).expect("built-in theory parses")
}

pub fn objects() -> Theory {
    load(OBJECTS)
}

pub fn pointed() -> Theory {
    load(POINTED)
}

pub fn symmetric_graph() -> Theory {
    load(SYMMETRIC_GRAPH)
}

pub fn inhabited() -> Theory {
    load(INHABITED)
}

pub fn span() -> Theory {
    load(SPAN)
}

/// Objects, pointed objects and symmetric graphs.
pub fn corpus() -> Vec<Theory> {
    vec![objects(), pointed(), symmetric_graph()]
}
