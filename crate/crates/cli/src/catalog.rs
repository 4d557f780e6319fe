//! Example manifests shipped with the binary. Each entry is parsed from its
//! text form, exactly like a user file.

use crate::manifest::{parse_manifest, Manifest};

pub struct Builtin {
    pub name: &'static str,
    pub source: &'static str,
    /// Quotient entries name the action to divide by.
    pub action: Option<&'static str>,
}

const TORUS3: &str = include_str!("../manifests/torus3.ddb");
const IWASAWA: &str = include_str!("../manifests/iwasawa.ddb");
const NAKAMURA: &str = include_str!("../manifests/nakamura.ddb");

pub const CATALOG: &[Builtin] = &[
    Builtin {
        name: "torus3",
        source: TORUS3,
        action: None,
    },
    Builtin {
        name: "iwasawa",
        source: IWASAWA,
        action: None,
    },
    Builtin {
        name: "nakamura",
        source: NAKAMURA,
        action: None,
    },
    Builtin {
        name: "iwasawa-z3",
        source: IWASAWA,
        action: Some("sigma"),
    },
    Builtin {
        name: "nakamura-z2",
        source: NAKAMURA,
        action: Some("sigma"),
    },
];

pub fn lookup(name: &str) -> Option<&'static Builtin> {
    CATALOG.iter().find(|b| b.name == name)
}

pub fn names() -> Vec<&'static str> {
    CATALOG.iter().map(|b| b.name).collect()
}

impl Builtin {
    pub fn manifest(&self) -> Manifest {
        parse_manifest(self.source).expect("builtin manifests parse")
    }
}
