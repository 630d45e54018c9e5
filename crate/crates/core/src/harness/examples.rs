use crate::error::Result;

use super::config::ExperimentConfig;
use super::experiment::Mode;

#[derive(Debug, Clone, Copy)]
pub struct BuiltinExample {
    pub name: &'static str,
    pub about: &'static str,
    /// Verb the example is meant to be run with.
    pub mode: Mode,
    pub toml: &'static str,
}

impl BuiltinExample {
    pub fn config(&self) -> Result<ExperimentConfig> {
        ExperimentConfig::from_toml_str(self.toml)
    }
}

macro_rules! builtin {
    ($name:literal, $mode:expr, $about:literal) => {
        BuiltinExample {
            name: $name,
            about: $about,
            mode: $mode,
            toml: include_str!(concat!("../../configs/", $name, ".toml")),
        }
    };
}

const BUILTIN: [BuiltinExample; 8] = [
    builtin!("point-source-1d", Mode::Compare, "unit atom at the midpoint; exact, FE and FD profiles"),
    builtin!("growing-centred-1d", Mode::Evolve, "heap growth under a centred patch"),
    builtin!("growing-wall-1d", Mode::Evolve, "heap growth under a patch next to the wall"),
    builtin!("growing-split-1d", Mode::Evolve, "heap growth under two disjoint patches"),
    builtin!("centred-patch-1d", Mode::Compare, "error table for a centred patch, h = 0.01 .. 0.001"),
    builtin!("central-ball-2d", Mode::Compare, "square silo, disk source at the centre"),
    builtin!("two-balls-2d", Mode::Compare, "square silo, two disjoint disk sources"),
    builtin!("growing-ball-2d", Mode::Evolve, "heap growth in the square, snapshots"),
];

pub fn builtin_examples() -> &'static [BuiltinExample] {
    &BUILTIN
}

pub fn find_example(name: &str) -> Option<&'static BuiltinExample> {
    BUILTIN.iter().find(|e| e.name == name)
}
