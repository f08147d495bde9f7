//! Figure presets. Each one is a configuration layer tied to the subcommand
//! that produces the figure's data.

use crate::config::Config;
use crate::error::{CliError, Result};

pub struct Preset {
    pub name: &'static str,
    pub command: &'static str,
    pub text: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2-left",
        command: "eta-sweep",
        text: "sphere.radius = 150 um, 100 um, 50 um\npfa.d2 = inf\n",
    },
    Preset {
        name: "fig2-right",
        command: "eta-sweep",
        text: "sphere.radius = 150 um\npfa.d2 = 1 um, 10 um, 100 um, 1 mm\n",
    },
    Preset {
        name: "fig3-left",
        command: "eta-layered-sweep",
        text: "sphere.radius = 150 um, 100 um, 50 um\nsphere.radius_kind = core\npfa.d2 = 1e8 um\n",
    },
    Preset {
        name: "fig3-right",
        command: "eta-layered-sweep",
        text: "sphere.radius = 150 um\nsphere.radius_kind = core\npfa.d2 = 1 um, 10 um, 100 um, 1 mm\n",
    },
    Preset {
        name: "fig4-left",
        command: "xi-power-sweep",
        text: "xi.mode = rd\nsphere.radius = 150 um\nseparation = 100 nm\npower.n = 1, 2, 3, 4\n\
               disk.kappa.min = 1\ndisk.kappa.max = 100\ndisk.kappa.points = 100\n",
    },
    Preset {
        name: "fig4-right",
        command: "xi-power-sweep",
        text: "xi.mode = n\nsphere.radius = 150 um\nseparation = 100 nm\ndisk.kappa = 1, 2, 10, 100\n\
               power.n.min = 0.5\npower.n.max = 4.5\npower.n.points = 81\n",
    },
    Preset {
        name: "fig5",
        command: "xi-yukawa-sweep",
        text: "sphere.radius = 150 um\nseparation = 100 nm\nyukawa.lambda = 100 um, 500 um, 1000 um\n\
               disk.kappa.min = 1\ndisk.kappa.max = 100\ndisk.kappa.points = 100\n",
    },
];

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

/// The preset's configuration layer, checked against the subcommand it is used with.
pub fn load(name: &str, command: &str) -> Result<Config> {
    let p = PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| CliError::input(format!("unknown preset `{name}` (known: {})", names().join(", "))))?;
    if p.command != command {
        return Err(CliError::input(format!("preset `{name}` belongs to `{}`, not `{command}`", p.command)));
    }
    Config::parse(p.text, &format!("preset {name}"))
}
