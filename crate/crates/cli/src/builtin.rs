//! Scenarios shipped with the binary.

pub struct Builtin {
    pub name: &'static str,
    pub source: &'static str,
}

/// Alphabetical.
pub const BUILTINS: &[Builtin] = &[
    Builtin {
        name: "fig1c",
        source: include_str!("../scenarios/fig1c.scn"),
    },
    Builtin {
        name: "fig1d",
        source: include_str!("../scenarios/fig1d.scn"),
    },
    Builtin {
        name: "fig3",
        source: include_str!("../scenarios/fig3.scn"),
    },
    Builtin {
        name: "fig4",
        source: include_str!("../scenarios/fig4.scn"),
    },
    Builtin {
        name: "hom",
        source: include_str!("../scenarios/hom.scn"),
    },
    Builtin {
        name: "rates",
        source: include_str!("../scenarios/rates.scn"),
    },
];

pub fn find(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}

/// One line per built-in: name and description.
pub fn listing() -> String {
    let mut out = String::new();
    for b in BUILTINS {
        let description = crate::Scenario::parse(b.source)
            .ok()
            .and_then(|s| s.description)
            .unwrap_or_default();
        out.push_str(&format!("  {:<8} {description}\n", b.name));
    }
    out
}
