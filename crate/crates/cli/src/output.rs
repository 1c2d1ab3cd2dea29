//! Writing records as CSV or JSON, and the companion plot scripts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Output file stem `<command>-<n>-<params>`, with `params` rendered as
/// `key` followed by the value, joined by `_`.
pub fn stem(command: &str, n: u32, params: &[(&str, String)]) -> String {
    let mut s = format!("{command}-{n}");
    if !params.is_empty() {
        let joined: Vec<String> = params.iter().map(|(k, v)| format!("{k}{v}")).collect();
        s.push('-');
        s.push_str(&joined.join("_"));
    }
    s
}

/// Shortest decimal that round-trips, as used for file names.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub struct Sink {
    dir: PathBuf,
    format: Format,
}

impl Sink {
    /// Creates the output directory if needed and checks it accepts files.
    pub fn open(dir: &Path, format: Format) -> Result<Self, Failure> {
        let unwritable = |e: std::io::Error| {
            Failure::Validation(format!("output directory {} is not writable: {e}", dir.display()))
        };
        fs::create_dir_all(dir).map_err(unwritable)?;
        let probe = dir.join(".scalinj-probe");
        fs::write(&probe, b"").map_err(unwritable)?;
        fs::remove_file(&probe).map_err(unwritable)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
        })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn write<T: Serialize>(&self, stem: &str, records: &[T]) -> Result<PathBuf, Failure> {
        let path = self.dir.join(format!("{stem}.{}", self.format.extension()));
        let bytes = match self.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in records {
                    w.serialize(r).map_err(|e| Failure::Io(e.to_string()))?;
                }
                w.into_inner().map_err(|e| Failure::Io(e.to_string()))?
            }
            Format::Json => {
                let mut v = serde_json::to_vec_pretty(records).map_err(|e| Failure::Io(e.to_string()))?;
                v.push(b'\n');
                v
            }
        };
        write_file(&path, &bytes)?;
        Ok(path)
    }

    /// Writes `<stem>.gp` next to the data file.
    pub fn write_plot(&self, stem: &str, script: &str) -> Result<PathBuf, Failure> {
        let path = self.dir.join(format!("{stem}.gp"));
        write_file(&path, script.as_bytes())?;
        Ok(path)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let mut f = fs::File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    f.write_all(bytes)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn preamble(data: &str, title: &str) -> String {
    format!(
        "# data: {data}\n\
         set datafile separator ','\n\
         set key top right\n\
         set title '{title}'\n"
    )
}

pub fn profile_script(data: &str, title: &str) -> String {
    preamble(data, title)
        + "set xlabel 'r'\n\
           set ylabel 'scal'\n\
           set xrange [0:pi]\n"
        + &format!(
            "plot '{data}' using 1:2 skip 1 with lines title 'scal', \\\n     2 with lines dashtype 2 title 'product metric'\n"
        )
}

pub fn dbar_script(data: &str) -> String {
    preamble(data, "D-bar on (2pi/3, pi)")
        + "set xlabel 'r / pi'\n\
           set ylabel 'D-bar / pi'\n\
           set yrange [2.5:6]\n"
        + &format!("plot '{data}' using ($1/pi):($2/pi) skip 1 with lines title 'D-bar'\n")
}

pub fn region_script(data: &str) -> String {
    preamble(data, "endpoint curvature regions")
        + "set xlabel 'alpha'\n\
           set ylabel 'beta'\n\
           is(c) = (strcol(c) eq 'true')\n"
        + &format!(
            "plot '{data}' using 1:(is(6) ? $2 : 1/0) skip 1 with points pt 7 ps 0.3 lc rgb 'blue' title 'scal(pi/2) >= 2', \\\n     \
             '{data}' using 1:(is(7) ? $2 : 1/0) skip 1 with points pt 7 ps 0.3 lc rgb 'pink' title 'scal(0) >= 2', \\\n     \
             '{data}' using 1:(is(8) ? $2 : 1/0) skip 1 with points pt 7 ps 0.5 lc rgb 'black' title 'scal > 2 throughout'\n"
        )
}
