//! Reproduction of the four indicator-spectrum figures: a random set, an
//! arithmetic progression, and two kinds of disjoint unions. Parameters are
//! fixed; only the seed varies, and the default seed is the committed one.
//!
//! Each figure writes `figure<n>.csv` with rows `(m, |fhat(m)|)` and a stem
//! plot `figure<n>.svg` into the output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use energy_recover_core::ensembles::{random_subset, RngSeed};
use energy_recover_core::error::{Error, Result};
use energy_recover_core::group::{DftPlan, GroupSpec, IndexSet, Point};

use crate::svg::stem_plot;

/// Seed of the committed figure fixtures.
pub const FIGURE_FIXTURE_SEED: RngSeed = RngSeed {
    seed: 608,
    stream: 0,
};

/// A computed figure: the underlying set and its spectrum moduli.
#[derive(Debug, Clone)]
pub struct FigureData {
    pub number: u8,
    pub title: String,
    pub group: GroupSpec,
    pub set: IndexSet,
    pub moduli: Vec<f64>,
}

fn ap(group: &GroupSpec, length: usize) -> Result<IndexSet> {
    energy_recover_core::ensembles::arithmetic_progression(
        group,
        &Point::new(vec![0], group)?,
        &Point::new(vec![1], group)?,
        length,
    )
}

/// Embed a set of Z_m into Z_n (n >= m) by direct inclusion of residues.
fn embed(set: &IndexSet, target: &GroupSpec) -> Result<IndexSet> {
    IndexSet::from_flat_indices(*target, set.flat_indices().to_vec())
}

/// Draw `k` random points of `group` that avoid `forbidden`, resampling
/// whole sets on successive substreams until disjoint.
fn random_disjoint_from(
    group: &GroupSpec,
    k: usize,
    forbidden: &IndexSet,
    seed: RngSeed,
) -> Result<IndexSet> {
    for attempt in 0..1000 {
        let candidate = random_subset(group, k, seed.substream(attempt))?;
        if candidate.is_disjoint(forbidden) {
            return Ok(candidate);
        }
    }
    unreachable!("a disjoint draw exists at these densities")
}

/// Compute the data behind figure `n` for the given seed.
pub fn figure_data(n: u8, seed: RngSeed) -> Result<FigureData> {
    let (group, set, title) = match n {
        1 => {
            let g = GroupSpec::new(100, 1)?;
            let set = random_subset(&g, 10, seed.substream(10))?;
            (g, set, "spectrum of a random 10-set in Z_100")
        }
        2 => {
            let g = GroupSpec::new(100, 1)?;
            (g, ap(&g, 10)?, "spectrum of a 10-term progression in Z_100")
        }
        3 => {
            // The Z_100 sets of figures 1 and 2, re-embedded into Z_200 by
            // direct inclusion of residues; the random part is resampled
            // until disjoint from the progression.
            let g100 = GroupSpec::new(100, 1)?;
            let g = GroupSpec::new(200, 1)?;
            let progression = embed(&ap(&g100, 10)?, &g)?;
            let random_part = {
                let mut found = None;
                for attempt in 0..1000 {
                    let c = random_subset(&g100, 10, seed.substream(10 + attempt))?;
                    let embedded = embed(&c, &g)?;
                    if embedded.is_disjoint(&progression) {
                        found = Some(embedded);
                        break;
                    }
                }
                found.expect("a Z_100 10-set disjoint from {0..9} exists")
            };
            let union = progression.union(&random_part)?;
            (
                g,
                union,
                "spectrum of a progression joined with a random set in Z_200",
            )
        }
        4 => {
            let g = GroupSpec::new(500, 1)?;
            let progression = ap(&g, 5)?;
            let random_part = random_disjoint_from(&g, 20, &progression, seed.substream(40))?;
            let union = progression.union(&random_part)?;
            (
                g,
                union,
                "spectrum of a short progression joined with 20 random points in Z_500",
            )
        }
        other => {
            return Err(Error::Parse {
                what: "figure number",
                reason: format!("expected 1..=4, got {other}"),
            })
        }
    };
    let plan = DftPlan::new(group);
    let moduli: Vec<f64> = plan
        .dft_indicator(&set)?
        .values()
        .iter()
        .map(|v| v.norm())
        .collect();
    Ok(FigureData {
        number: n,
        title: title.to_string(),
        group,
        set,
        moduli,
    })
}

/// Render the CSV body `(m, |fhat(m)|)` for a figure.
pub fn figure_csv(data: &FigureData) -> String {
    let mut out = String::from("m,modulus\n");
    for (m, v) in data.moduli.iter().enumerate() {
        let _ = writeln!(out, "{m},{v}");
    }
    out
}

/// Paths written by [`write_figure`].
#[derive(Debug, Clone)]
pub struct FigureFiles {
    pub csv: PathBuf,
    pub svg: PathBuf,
}

/// Compute figure `n` and write its CSV and SVG into `out_dir`.
pub fn write_figure(n: u8, seed: RngSeed, out_dir: &Path) -> Result<(FigureData, FigureFiles)> {
    let data = figure_data(n, seed)?;
    fs::create_dir_all(out_dir)?;
    let csv = out_dir.join(format!("figure{n}.csv"));
    let svg = out_dir.join(format!("figure{n}.svg"));
    fs::write(&csv, figure_csv(&data))?;
    fs::write(&svg, stem_plot(&data.title, &data.moduli))?;
    Ok((data, FigureFiles { csv, svg }))
}

/// Largest modulus away from the zero frequency.
pub fn max_nonzero_frequency_modulus(data: &FigureData) -> f64 {
    data.moduli[1..].iter().copied().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_two_matches_dirichlet_kernel() {
        let data = figure_data(2, FIGURE_FIXTURE_SEED).unwrap();
        assert_eq!(data.set.flat_indices(), &(0..10).collect::<Vec<_>>()[..]);
        assert!((data.moduli[0] - 0.1).abs() < 1e-12);
        for m in 1..100usize {
            let t = std::f64::consts::PI * m as f64 / 100.0;
            let expected = ((10.0 * t).sin() / t.sin()).abs() / 100.0;
            assert!(
                (data.moduli[m] - expected).abs() < 1e-10,
                "kernel mismatch at m={m}"
            );
        }
    }

    #[test]
    fn figure_sets_have_the_stated_shapes() {
        let seed = FIGURE_FIXTURE_SEED;
        assert_eq!(figure_data(1, seed).unwrap().set.len(), 10);
        let f3 = figure_data(3, seed).unwrap();
        assert_eq!(f3.group.modulus(), 200);
        assert_eq!(f3.set.len(), 20);
        assert!(f3.set.flat_indices().iter().take(10).eq((0..10).collect::<Vec<_>>().iter()));
        let f4 = figure_data(4, seed).unwrap();
        assert_eq!(f4.group.modulus(), 500);
        assert_eq!(f4.set.len(), 25);
        assert!(figure_data(5, seed).is_err());
    }

    #[test]
    fn figures_are_deterministic() {
        let a = figure_csv(&figure_data(1, FIGURE_FIXTURE_SEED).unwrap());
        let b = figure_csv(&figure_data(1, FIGURE_FIXTURE_SEED).unwrap());
        assert_eq!(a, b);
    }
}
