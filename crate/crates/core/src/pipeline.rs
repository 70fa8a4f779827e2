//! End-to-end decision: stratify directions, match planar bodies per cell,
//! keep the stable feature permutations, read off per-cell relations and
//! patch them into one exactly verified global relation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::congruence::{alignments, lift_alignments, LiftedMap};
use crate::direction_space::{
    arrangement, exceptional_projection_set, exceptional_section_set, sample_cell_filtered, DegeneracyOracle,
    DirectionCell, GreatCircle, Mode,
};
use crate::error::{Error, Result};
use crate::kernel::{Polytope, Vector};
use crate::rat::Rat;
use crate::recovery::{
    global_patch, line_pair_classify, segment_pair_test, LinePairVerdict, Pairing, ParamLine, PatchInput,
    PatchRecord, SegmentVerdict, Sign,
};
use crate::shadow::{planar_body, PlanarBody};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub mode: Mode,
    pub samples_per_cell: usize,
    pub seed: u64,
    pub float_tol: Option<f64>,
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            mode: Mode::Projections,
            samples_per_cell: 8,
            seed: 0,
            float_tol: None,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Translate { b: Vector },
    ReflectTranslate { b: Vector },
    Identity,
    Reflection,
    NotCongruent { witness: Vector },
}

impl Verdict {
    pub fn is_positive(&self) -> bool {
        !matches!(self, Verdict::NotCongruent { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellEvidence {
    pub cell: usize,
    /// Largest number of planar witnesses seen at one sample.
    pub witnesses: usize,
    pub stable_permutations: usize,
    pub sign: Option<Sign>,
    pub offset: Option<Vector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub verdict: Verdict,
    pub evidence: Vec<CellEvidence>,
}

/// Frozen report layout written by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub mode: Mode,
    pub samples_per_cell: usize,
    pub seed: u64,
    pub circles: usize,
    pub cells: usize,
    pub verdict: Verdict,
    pub evidence: Vec<CellEvidence>,
}

type Candidate = (Sign, Option<Vector>);

enum CellOutcome {
    NotCongruent(Vector),
    Matched {
        witnesses: usize,
        stable: usize,
        candidates: BTreeSet<Candidate>,
    },
}

struct Context<'a> {
    p: &'a Polytope,
    q: &'a Polytope,
    mode: Mode,
    circles: &'a [GreatCircle],
    oracle: DegeneracyOracle,
    samples: usize,
    seed: u64,
    /// Edge lines of `p` and `q`, built once for sections.
    lines: [Vec<ParamLine>; 2],
}

fn cell_seed(seed: u64, cell: usize) -> u64 {
    seed ^ (cell as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn edge_lines(p: &Polytope) -> Vec<ParamLine> {
    (0..p.edges().len())
        .map(|e| {
            let (lo, _) = p.edges()[e].vertices;
            ParamLine::through(p.vertex(lo), &p.edge_vector(e))
                .expect("edge lines of an origin-interior body miss the origin")
        })
        .collect()
}

impl Context<'_> {
    fn process(&self, cell: &DirectionCell) -> Result<CellOutcome> {
        let samples = sample_cell_filtered(
            cell,
            self.circles,
            self.samples,
            cell_seed(self.seed, cell.id),
            |xi| !self.oracle.is_degenerate(xi),
        )?;
        let mut surviving: Option<BTreeSet<LiftedMap>> = None;
        let mut witnesses = 0;
        let mut first_body: Option<PlanarBody> = None;
        for xi in &samples {
            let a = planar_body(self.p, xi, self.mode)?;
            let b = planar_body(self.q, xi, self.mode)?;
            let maps = alignments(&a, &b);
            if maps.is_empty() {
                return Ok(CellOutcome::NotCongruent(xi.clone()));
            }
            witnesses = witnesses.max(maps.len());
            let lifted = lift_alignments(&a, &b, &maps);
            surviving = Some(match surviving {
                None => lifted,
                Some(prev) => prev.intersection(&lifted).cloned().collect(),
            });
            first_body.get_or_insert(a);
        }
        let surviving = surviving.unwrap_or_default();
        if surviving.is_empty() {
            return Err(Error::EmptyIntersection { cell: cell.id });
        }
        let cycle: Vec<usize> = first_body
            .expect("at least one sample")
            .preimage
            .iter()
            .map(|t| t.feature())
            .collect();
        let mut candidates = BTreeSet::new();
        for (_, sigma) in &surviving {
            let found = match self.mode {
                Mode::Projections => self.projection_candidates(&cycle, sigma, &samples),
                Mode::Sections => self.section_candidate(&cycle, sigma, &samples)?.into_iter().collect(),
            };
            candidates.extend(found);
        }
        if candidates.is_empty() {
            return Err(Error::NoConsistentPatch(cell.id, cell.id));
        }
        Ok(CellOutcome::Matched {
            witnesses,
            stable: surviving.len(),
            candidates,
        })
    }

    /// Per-cell `(sign, b)` with `q_σ(i) = ±p_i + b` for all matched
    /// vertices, after checking matched boundary edges segment by segment.
    fn projection_candidates(&self, cycle: &[usize], sigma: &[(usize, usize)], dirs: &[Vector]) -> Vec<Candidate> {
        let image = |v: usize| sigma[sigma.binary_search_by_key(&v, |&(a, _)| a).expect("σ covers the cycle")].1;
        let k = cycle.len();
        let mut signs = vec![Sign::Plus, Sign::Minus];
        for i in 0..k {
            let (u, v) = (cycle[i], cycle[(i + 1) % k]);
            let (pu, pv) = (self.p.vertex(u), self.p.vertex(v));
            let (qu, qv) = (self.q.vertex(image(u)), self.q.vertex(image(v)));
            match segment_pair_test(pu, pv, qu, qv, dirs) {
                Ok(SegmentVerdict::ParallelEqual { .. }) => {}
                _ => return Vec::new(),
            }
            let (dp, dq) = (pv - pu, qv - qu);
            signs.retain(|s| match s {
                Sign::Plus => dq == dp,
                Sign::Minus => dq == -&dp,
            });
        }
        let mut out = Vec::new();
        for s in signs {
            let offset = |&(pi, qi): &(usize, usize)| match s {
                Sign::Plus => self.q.vertex(qi) - self.p.vertex(pi),
                Sign::Minus => self.q.vertex(qi) + self.p.vertex(pi),
            };
            let b = offset(&sigma[0]);
            if sigma.iter().all(|pair| offset(pair) == b) {
                out.push((s, Some(b)));
            }
        }
        out
    }

    /// Per-cell sign with `l̃_σ(j) = ±l_j` for every crossed edge line,
    /// classified pairwise along the section polygon.
    fn section_candidate(&self, cycle: &[usize], sigma: &[(usize, usize)], dirs: &[Vector]) -> Result<Option<Candidate>> {
        let image = |e: usize| sigma[sigma.binary_search_by_key(&e, |&(a, _)| a).expect("σ covers the cycle")].1;
        let k = cycle.len();
        let mut sign: Option<Sign> = None;
        for i in 0..k {
            let (e, f) = (cycle[i], cycle[(i + 1) % k]);
            let [lp, lq] = &self.lines;
            let s = match line_pair_classify(&lp[e], &lp[f], &lq[image(e)], &lq[image(f)], dirs)? {
                LinePairVerdict::SignMatch {
                    s1,
                    s2,
                    pairing: Pairing::P13_24,
                } if s1 == s2 => s1,
                LinePairVerdict::ParallelTranslate { b } if b.is_zero() => Sign::Plus,
                LinePairVerdict::ParallelSwap { c } if c.is_zero() => Sign::Minus,
                _ => return Ok(None),
            };
            if sign.is_some_and(|prev| prev != s) {
                return Ok(None);
            }
            sign = Some(s);
        }
        Ok(sign.map(|s| (s, None)))
    }
}

/// Least common denominator of all vertex coordinates.
fn common_denominator(bodies: &[&Polytope]) -> Rat {
    let coords: Vec<Rat> = bodies
        .iter()
        .flat_map(|b| b.vertices().iter().flat_map(|v| v.coords().iter().cloned()))
        .collect();
    let lcm: BigInt = Rat::denom_lcm(&coords);
    Rat::from(lcm)
}

/// Exact check of a positive verdict.
pub fn verify(p: &Polytope, q: &Polytope, relation: &Relation) -> bool {
    use crate::recovery::relation_holds;
    let zero = Vector::zeros(3);
    match &relation.verdict {
        Verdict::Translate { b } => relation_holds(p, q, Sign::Plus, b),
        Verdict::ReflectTranslate { b } => relation_holds(p, q, Sign::Minus, b),
        Verdict::Identity => relation_holds(p, q, Sign::Plus, &zero),
        Verdict::Reflection => relation_holds(p, q, Sign::Minus, &zero),
        Verdict::NotCongruent { .. } => false,
    }
}

/// Stratifies the sphere for `mode` and returns the arrangement circles.
pub fn exceptional_circles(p: &Polytope, q: &Polytope, mode: Mode) -> Result<Vec<GreatCircle>> {
    match mode {
        Mode::Projections => Ok(exceptional_projection_set(p, q)),
        Mode::Sections => exceptional_section_set(p, q),
    }
}

pub fn decide(p: &Polytope, q: &Polytope, cfg: &Config) -> Result<Relation> {
    decide_report(p, q, cfg).map(|r| Relation {
        verdict: r.verdict,
        evidence: r.evidence,
    })
}

pub fn decide_report(p: &Polytope, q: &Polytope, cfg: &Config) -> Result<Report> {
    if cfg.samples_per_cell < 2 {
        return Err(Error::Precondition("samples_per_cell must be at least 2".into()));
    }
    let circles = exceptional_circles(p, q, cfg.mode)?;
    let arr = arrangement(&circles);

    // Work on integer coordinates; every relation is scale-equivariant.
    let k = common_denominator(&[p, q]);
    let (ps, qs) = (p.scaled(&k), q.scaled(&k));
    let ctx = Context {
        p: &ps,
        q: &qs,
        mode: cfg.mode,
        circles: &circles,
        oracle: DegeneracyOracle::new(&ps, &qs, cfg.mode),
        samples: cfg.samples_per_cell,
        seed: cfg.seed,
        lines: match cfg.mode {
            Mode::Projections => [Vec::new(), Vec::new()],
            Mode::Sections => [edge_lines(&ps), edge_lines(&qs)],
        },
    };
    let run = || arr.cells.par_iter().map(|c| ctx.process(c)).collect::<Vec<_>>();
    let outcomes = match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    let report = |verdict: Verdict, evidence: Vec<CellEvidence>| Report {
        schema_version: SCHEMA_VERSION,
        mode: cfg.mode,
        samples_per_cell: cfg.samples_per_cell,
        seed: cfg.seed,
        circles: circles.len(),
        cells: arr.cells.len(),
        verdict,
        evidence,
    };

    if let Some(xi) = outcomes.iter().find_map(|o| match o {
        Ok(CellOutcome::NotCongruent(xi)) => Some(xi.clone()),
        _ => None,
    }) {
        return Ok(report(Verdict::NotCongruent { witness: xi }, Vec::new()));
    }
    let mut matched = Vec::with_capacity(outcomes.len());
    for (cell, o) in arr.cells.iter().zip(outcomes) {
        match o? {
            CellOutcome::Matched {
                witnesses,
                stable,
                candidates,
            } => matched.push((cell.id, witnesses, stable, candidates)),
            CellOutcome::NotCongruent(_) => unreachable!("handled above"),
        }
    }

    let common: BTreeSet<Candidate> = matched
        .iter()
        .map(|m| m.3.clone())
        .reduce(|a, b| a.intersection(&b).cloned().collect())
        .unwrap_or_default();
    let chosen: Vec<Candidate> = matched
        .iter()
        .map(|m| {
            common
                .iter()
                .next()
                .or_else(|| m.3.iter().next())
                .cloned()
                .expect("matched cells have candidates")
        })
        .collect();
    let patch = PatchInput {
        cell_count: arr.cells.len(),
        records: matched
            .iter()
            .zip(&chosen)
            .map(|(m, (sign, offset))| PatchRecord {
                cell: m.0,
                sign: *sign,
                offset: offset.clone(),
            })
            .collect(),
    };
    let (sign, b_scaled) = global_patch(&patch, &ps, &qs, cfg.mode)?;
    let unscale = |v: &Vector| v.scale(&k.recip());
    let b = unscale(&b_scaled);

    let verdict = match (cfg.mode, sign) {
        (Mode::Projections, Sign::Plus) => Verdict::Translate { b },
        (Mode::Projections, Sign::Minus) => Verdict::ReflectTranslate { b },
        (Mode::Sections, Sign::Plus) => Verdict::Identity,
        (Mode::Sections, Sign::Minus) => Verdict::Reflection,
    };
    let evidence: Vec<CellEvidence> = matched
        .iter()
        .zip(&chosen)
        .map(|(m, (sign, offset))| CellEvidence {
            cell: m.0,
            witnesses: m.1,
            stable_permutations: m.2,
            sign: Some(*sign),
            offset: offset.as_ref().map(unscale),
        })
        .collect();
    let relation = Relation {
        verdict: verdict.clone(),
        evidence: Vec::new(),
    };
    assert!(verify(p, q, &relation), "positive verdicts are verified exactly");
    Ok(report(verdict, evidence))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::hull;

    fn simplex() -> Polytope {
        hull(&[
            Vector::xyz(-1, -1, -1),
            Vector::xyz(2, -1, -1),
            Vector::xyz(-1, 3, -1),
            Vector::xyz(-1, -1, 4),
        ])
        .unwrap()
    }

    #[test]
    fn reflected_translate_of_a_simplex() {
        let p = simplex();
        let q = p.reflect().translate(&Vector::xyz(1, 2, 3));
        let r = decide(&p, &q, &Config::default()).unwrap();
        assert_eq!(r.verdict, Verdict::ReflectTranslate { b: Vector::xyz(1, 2, 3) });
    }

    #[test]
    fn cube_sections_identity() {
        let cube = hull(
            &(0..8)
                .map(|i| Vector::xyz(2 * (i & 1) - 1, (i & 2) - 1, (i & 4) / 2 - 1))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let cfg = Config {
            mode: Mode::Sections,
            ..Config::default()
        };
        assert_eq!(decide(&cube, &cube, &cfg).unwrap().verdict, Verdict::Identity);
    }

    #[test]
    fn rotated_simplex_is_not_congruent() {
        let p = simplex();
        let rot = [
            Vector::new(vec![Rat::new(3, 5), Rat::new(-4, 5), Rat::zero()]),
            Vector::new(vec![Rat::new(4, 5), Rat::new(3, 5), Rat::zero()]),
            Vector::xyz(0, 0, 1),
        ];
        let q = p.linear_image(&rot).unwrap();
        let r = decide(&p, &q, &Config::default()).unwrap();
        assert!(matches!(r.verdict, Verdict::NotCongruent { .. }));
    }
}
