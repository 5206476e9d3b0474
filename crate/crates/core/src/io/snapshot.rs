//! Field snapshots: a text header closed by `end`, followed by the profiles
//! as raw little-endian IEEE-754 doubles, one column after the other.
//!
//! ```text
//! ep2d-snapshot 1
//! formulation primal
//! variables n u E
//! cells 512
//! r_max 40.0
//! time 12.5
//! params_hash <sha256 hex of the physical constants>
//! encoding f64-le columns
//! end
//! ```

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::radial::{Formulation, NormalizedState, PrimalState, RadialGrid};

pub const FORMAT_TAG: &str = "ep2d-snapshot";
pub const FORMAT_VERSION: u32 = 1;
const ENCODING: &str = "f64-le columns";

/// SHA-256 of the physical constants, formatted with round-trip precision.
pub fn params_hash(params: &PhysicalParams) -> String {
    let text = format!(
        "gamma={:?};A={:?};e={:?};m_e={:?};n0={:?};kappa={:?}",
        params.gamma,
        params.entropy_const_a,
        params.charge_e,
        params.mass_me,
        params.n0,
        params.kappa
    );
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub formulation: Formulation,
    pub time: f64,
    pub grid: RadialGrid,
    pub params_hash: String,
    /// Three profiles, in the order of [`Snapshot::variables`].
    pub fields: [Vec<f64>; 3],
}

impl Snapshot {
    pub fn variables(&self) -> [&'static str; 3] {
        variables(self.formulation)
    }

    pub fn from_primal(state: &PrimalState, grid: &RadialGrid, params: &PhysicalParams) -> Self {
        Snapshot {
            formulation: Formulation::Primal,
            time: state.time,
            grid: *grid,
            params_hash: params_hash(params),
            fields: [state.n.clone(), state.u.clone(), state.e.clone()],
        }
    }

    pub fn from_normalized(
        state: &NormalizedState,
        grid: &RadialGrid,
        params: &PhysicalParams,
    ) -> Self {
        Snapshot {
            formulation: Formulation::Normalized,
            time: state.time,
            grid: *grid,
            params_hash: params_hash(params),
            fields: [state.m.clone(), state.v.clone(), state.g.clone()],
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let header = format!(
            "{FORMAT_TAG} {FORMAT_VERSION}\nformulation {}\nvariables {}\ncells {}\nr_max {:?}\n\
             time {:?}\nparams_hash {}\nencoding {ENCODING}\nend\n",
            self.formulation.as_str(),
            self.variables().join(" "),
            self.grid.num_cells(),
            self.grid.r_max(),
            self.time,
            self.params_hash,
        );
        out.extend_from_slice(header.as_bytes());
        for field in &self.fields {
            for v in field {
                out.write_all(&v.to_le_bytes()).expect("writing to a Vec cannot fail");
            }
        }
        out
    }

    /// Parses a snapshot; `path` is only used in error messages.
    pub fn from_bytes(bytes: &[u8], path: &Path) -> Result<Self> {
        let bad = |detail: String| Error::Compatibility {
            path: path.to_path_buf(),
            detail,
        };
        let mut lines: Vec<(&str, &str)> = Vec::new();
        let mut offset = 0;
        loop {
            let rest = &bytes[offset..];
            let Some(len) = rest.iter().position(|&b| b == b'\n') else {
                return Err(bad("header is not terminated by `end`".into()));
            };
            let line = std::str::from_utf8(&rest[..len])
                .map_err(|_| bad("header is not UTF-8".into()))?;
            offset += len + 1;
            if line == "end" {
                break;
            }
            let (key, value) = line.split_once(' ').unwrap_or((line, ""));
            lines.push((key, value));
        }
        let field = |key: &str| -> Result<&str> {
            lines
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| bad(format!("header lacks `{key}`")))
        };
        let version = field(FORMAT_TAG)?;
        if version != FORMAT_VERSION.to_string() {
            return Err(bad(format!("format version {version}, expected {FORMAT_VERSION}")));
        }
        let encoding = field("encoding")?;
        if encoding != ENCODING {
            return Err(bad(format!("encoding `{encoding}`, expected `{ENCODING}`")));
        }
        let formulation = match field("formulation")? {
            "primal" => Formulation::Primal,
            "normalized" => Formulation::Normalized,
            other => return Err(bad(format!("unknown formulation `{other}`"))),
        };
        let expected = variables(formulation).join(" ");
        if field("variables")? != expected {
            return Err(bad(format!("variables `{}`, expected `{expected}`", field("variables")?)));
        }
        let number = |key: &str| -> Result<f64> {
            let text = field(key)?;
            text.parse().map_err(|_| bad(format!("`{key}` = `{text}` is not a number")))
        };
        let cells: usize = field("cells")?
            .parse()
            .map_err(|_| bad("`cells` is not an integer".into()))?;
        let grid = RadialGrid::new(cells, number("r_max")?)
            .map_err(|e| bad(format!("grid descriptor: {e}")))?;
        let time = number("time")?;
        let params_hash = field("params_hash")?.to_string();

        let payload = &bytes[offset..];
        if payload.len() != 3 * cells * 8 {
            return Err(bad(format!(
                "payload holds {} bytes, expected {}",
                payload.len(),
                3 * cells * 8
            )));
        }
        let mut values = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunks of eight bytes")));
        let fields = std::array::from_fn(|_| values.by_ref().take(cells).collect());
        Ok(Snapshot {
            formulation,
            time,
            grid,
            params_hash,
            fields,
        })
    }

    /// Fails with a compatibility error unless the snapshot was written on
    /// `grid` with the constants `params`.
    pub fn check(&self, grid: &RadialGrid, params: &PhysicalParams, path: &Path) -> Result<()> {
        let bad = |detail: String| Error::Compatibility {
            path: path.to_path_buf(),
            detail,
        };
        if self.grid != *grid {
            return Err(bad(format!(
                "grid {} cells / r_max {} does not match {} cells / r_max {}",
                self.grid.num_cells(),
                self.grid.r_max(),
                grid.num_cells(),
                grid.r_max()
            )));
        }
        let expected = params_hash(params);
        if self.params_hash != expected {
            return Err(bad(format!(
                "parameter hash {} does not match {expected}",
                self.params_hash
            )));
        }
        Ok(())
    }

    pub fn into_primal(self, path: &Path) -> Result<PrimalState> {
        match self.formulation {
            Formulation::Primal => {
                let [n, u, e] = self.fields;
                Ok(PrimalState {
                    time: self.time,
                    n,
                    u,
                    e,
                })
            }
            Formulation::Normalized => Err(Error::Compatibility {
                path: path.to_path_buf(),
                detail: "holds a normalized state, expected primal".into(),
            }),
        }
    }

    pub fn into_normalized(self, path: &Path) -> Result<NormalizedState> {
        match self.formulation {
            Formulation::Normalized => {
                let [m, v, g] = self.fields;
                Ok(NormalizedState {
                    time: self.time,
                    m,
                    v,
                    g,
                })
            }
            Formulation::Primal => Err(Error::Compatibility {
                path: path.to_path_buf(),
                detail: "holds a primal state, expected normalized".into(),
            }),
        }
    }
}

fn variables(formulation: Formulation) -> [&'static str; 3] {
    match formulation {
        Formulation::Primal => ["n", "u", "E"],
        Formulation::Normalized => ["m", "v", "g"],
    }
}

pub fn write_snapshot(path: &Path, snapshot: &Snapshot) -> Result<()> {
    std::fs::write(path, snapshot.to_bytes()).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Snapshot::from_bytes(&bytes, path)
}

/// Reads a snapshot and checks it against the grid and constants of the
/// run that loads it.
pub fn load_snapshot(path: &Path, grid: &RadialGrid, params: &PhysicalParams) -> Result<Snapshot> {
    let snapshot = read_snapshot(path)?;
    snapshot.check(grid, params, path)?;
    Ok(snapshot)
}

/// `t_<time>.snap` with a fixed-width time stamp.
pub fn snapshot_file_name(time: f64) -> String {
    format!("t_{time:012.6}.snap")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bytes_round_trip_bit_exactly() {
        let grid = RadialGrid::new(64, 7.3).unwrap();
        let params = PhysicalParams::paper(3.0, 1.0);
        let state = PrimalState {
            time: 0.1 + 0.2,
            n: (0..64).map(|j| 1.0 + (j as f64).sin() * 1e-3).collect(),
            u: (0..64).map(|j| -(j as f64).cbrt() / 7.0).collect(),
            e: (0..64).map(|j| f64::MIN_POSITIVE * j as f64).collect(),
        };
        let snap = Snapshot::from_primal(&state, &grid, &params);
        let back = Snapshot::from_bytes(&snap.to_bytes(), Path::new("mem")).unwrap();
        assert_eq!(back, snap);
        let loaded = back.into_primal(Path::new("mem")).unwrap();
        assert!(loaded.n.iter().zip(&state.n).all(|(a, b)| a.to_bits() == b.to_bits()));
        assert_eq!(loaded.time.to_bits(), state.time.to_bits());
    }

    #[test]
    fn mismatched_constants_are_incompatible() {
        let grid = RadialGrid::new(64, 10.0).unwrap();
        let params = PhysicalParams::paper(3.0, 1.0);
        let snap = Snapshot::from_primal(&PrimalState::equilibrium(&grid, 1.0), &grid, &params);
        let other = PhysicalParams::paper(2.0, 1.0);
        assert!(matches!(
            snap.check(&grid, &other, Path::new("x")),
            Err(Error::Compatibility { .. })
        ));
        let coarse = RadialGrid::new(128, 10.0).unwrap();
        assert!(snap.check(&coarse, &params, Path::new("x")).is_err());
        let mut bytes = snap.to_bytes();
        bytes.pop();
        assert!(Snapshot::from_bytes(&bytes, Path::new("x")).is_err());
    }
}
