//! Named recipes for the reference numbers. Each preset is a list of
//! ordinary command lines; `{dir}` expands to the output directory.

use std::path::PathBuf;

use clap::Parser;

use crate::args::{Cli, ReproArgs};
use crate::{commands, CliError};

pub struct Preset {
    pub name: &'static str,
    pub about: &'static str,
    pub steps: &'static [&'static str],
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "sqrt2-harmonic",
        about: "errors below 1e-7, 1e-14, 1e-19 near n = 98, 850, 3858",
        steps: &["approximate --target sqrt(2) --seq harmonic --steps 4000 --stride 1 --out {dir}/sqrt2-harmonic.json"],
    },
    Preset {
        name: "sqrt2-invsq",
        about: "error below 1e-23 near n = 4566 with 1/n^2",
        steps: &["approximate --target sqrt(2) --seq invsq --steps 4572 --stride 1 --out {dir}/sqrt2-invsq.json"],
    },
    Preset {
        name: "log2-harmonic",
        about: "strictly alternating signs, error about 1/(2n)",
        steps: &["approximate --target log(2) --seq harmonic --steps 10000 --out {dir}/log2-harmonic.json"],
    },
    Preset {
        name: "thue-morse",
        about: "Thue-Morse sign window after a_55 for x = 0.8",
        steps: &[
            "approximate --target 0.8 --seq harmonic --steps 200 --stride 1 --out {dir}/tm.json",
            "analyze --file {dir}/tm.json --no-liminf --out {dir}/tm-report.json",
        ],
    },
    Preset {
        name: "window-invsq",
        about: "window condition for 1/n^2 with l = 5 fails only at j = 1",
        steps: &["check --seq invsq --ell 5 --jmax 1000 --out {dir}/window-invsq.json"],
    },
    Preset {
        name: "basel",
        about: "enclosure of the sum of 1/n^2",
        steps: &["check --seq invsq --sum --out {dir}/basel.json"],
    },
    Preset {
        name: "inequality",
        about: "1/N^k against the averaged window for N = 2, k = 1",
        steps: &["check --n 2 --k 1 --sec33 --out {dir}/inequality.json"],
    },
    Preset {
        name: "hits",
        about: "hit levels for sqrt(2) with 1/n against the prime-reciprocal control",
        steps: &[
            "approximate --target sqrt(2) --seq harmonic --steps 100000 --stride 1000 --out {dir}/hits-harmonic.json",
            "approximate --target sqrt(2) --seq primes --steps 10000 --stride 100 --out {dir}/hits-primes.json",
        ],
    },
    Preset {
        name: "liminf",
        about: "running minimum of log|x - a_n| / (log n)^2 up to 10^6",
        steps: &[
            "approximate --target sqrt(2) --seq harmonic --steps 1000000 --stride 1000 --out {dir}/liminf.json",
            "analyze --file {dir}/liminf.json --k 4 --beta 1.5 --out {dir}/liminf-report.json",
        ],
    },
    Preset {
        name: "walk-sqrt3",
        about: "nearest-integer phase walk with beta = sqrt(3)",
        steps: &["walk --gen nearestint --beta sqrt(3) --steps 100000 --out {dir}/walk-sqrt3.csv"],
    },
];

pub fn run(a: ReproArgs) -> Result<(), CliError> {
    if a.list {
        for p in PRESETS {
            println!("{:<16}{}", p.name, p.about);
        }
        return Ok(());
    }
    let name = a
        .preset
        .ok_or_else(|| CliError::Usage("missing preset name (use --list)".into()))?;
    let chosen: Vec<&Preset> = if name == "all" {
        PRESETS.iter().collect()
    } else {
        let p = PRESETS
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| CliError::Usage(format!("unknown preset {name:?} (use --list)")))?;
        vec![p]
    };
    let dir = a.out.unwrap_or_else(|| PathBuf::from("repro-out"));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let dir_str = dir.to_string_lossy();
    for p in chosen {
        println!("== {}: {}", p.name, p.about);
        for line in p.steps {
            let expanded = line.replace("{dir}", &dir_str);
            println!("$ signwalk {expanded}");
            let argv = std::iter::once("signwalk").chain(expanded.split_whitespace());
            let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
            commands::dispatch(cli.command)?;
        }
    }
    Ok(())
}
