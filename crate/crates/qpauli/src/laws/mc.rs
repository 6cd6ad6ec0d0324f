//! Monte Carlo cross-checks: sample the model matrix at uniform sphere
//! points, extract eigenvalues, and accumulate empirical moments and a
//! histogram of the spectral law.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::TPoly;
use crate::haar::{sample_sphere, seeded_rng, McEstimate};
use crate::laws::{model_matrix_symbolic, VariableKind, VariableSpec};

/// Eigenvalues of a symmetric 4x4 matrix by cyclic Jacobi rotations.
///
/// Converges when the off-diagonal Frobenius norm falls below `1e-13`;
/// more than 50 sweeps is a failure, reported rather than masked.
pub fn jacobi_eigenvalues(mut a: [[f64; 4]; 4]) -> Result<[f64; 4]> {
    const TOL: f64 = 1e-13;
    const MAX_SWEEPS: usize = 50;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..4 {
            for q in (p + 1)..4 {
                off += 2.0 * a[p][q] * a[p][q];
            }
        }
        if off.sqrt() < TOL {
            let mut ev = [a[0][0], a[1][1], a[2][2], a[3][3]];
            ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
            return Ok(ev);
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..4 {
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for r in 0..4 {
                    let apr = a[p][r];
                    let aqr = a[q][r];
                    a[p][r] = c * apr - s * aqr;
                    a[q][r] = s * apr + c * aqr;
                }
            }
        }
    }
    Err(Error::NonConvergence(
        "Jacobi eigenvalue iteration exceeded 50 sweeps".into(),
    ))
}

/// Numeric matrix entries at a sample point: term lists compiled once from
/// the symbolic model.
struct CompiledMatrix {
    entries: [[Vec<(f64, [u16; 4])>; 4]; 4],
}

impl CompiledMatrix {
    fn new(kind: VariableKind, t: f64) -> Self {
        let sym = model_matrix_symbolic(kind);
        let entries = std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                sym[r][c]
                    .terms()
                    .map(|(e, coeff): (&[u16; 4], &TPoly)| (coeff.eval_f64(t), *e))
                    .collect()
            })
        });
        CompiledMatrix { entries }
    }

    fn eval(&self, p: [f64; 4]) -> [[f64; 4]; 4] {
        std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                let mut acc = 0.0;
                for (coeff, e) in &self.entries[r][c] {
                    let mut m = *coeff;
                    for axis in 0..4 {
                        for _ in 0..e[axis] {
                            m *= p[axis];
                        }
                    }
                    acc += m;
                }
                acc
            })
        })
    }
}

/// Eigenvalue histogram over a fixed range.
#[derive(Clone, Debug)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    fn new(lo: f64, hi: f64, bins: usize) -> Self {
        Histogram {
            lo,
            hi,
            counts: vec![0; bins],
        }
    }

    fn record(&mut self, x: f64) {
        let bins = self.counts.len();
        let f = (x - self.lo) / (self.hi - self.lo);
        let idx = ((f * bins as f64) as usize).min(bins - 1);
        self.counts[idx] += 1;
    }

    fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// Empirical spectral data of a seeded Monte Carlo run.
#[derive(Clone, Debug)]
pub struct McLawReport {
    pub variable: String,
    pub seed: u64,
    pub samples: u64,
    /// Samples whose eigenvalue iteration failed to converge.
    pub rejected: u64,
    /// Empirical moments of order `1..=max_order` under the normalized trace.
    pub moments: Vec<McEstimate>,
    pub histogram: Histogram,
    /// Fraction of eigenvalues that are numerically zero.
    pub zero_eigenvalue_fraction: f64,
}

fn histogram_range(spec: &VariableSpec) -> (f64, f64) {
    let t = spec
        .t
        .as_ref()
        .map(|t| t.to_f64().abs())
        .unwrap_or(0.0);
    match spec.kind {
        VariableKind::N3 => (0.0, 3.0),
        VariableKind::Wt => ((0.5 * (1.0 - t)).min(0.0), (0.5 * (1.0 + t)).max(1.0)),
        VariableKind::Vt => ((-0.5 * t).min(0.0), 1.0),
        _ => (0.0, 1.0),
    }
}

const SHARD_SIZE: u64 = 1 << 15;
const ZERO_EIGENVALUE_TOL: f64 = 1e-9;

struct Shard {
    n: u64,
    rejected: u64,
    zero_count: u64,
    moment_acc: Vec<(f64, f64)>, // Welford (mean, m2) per order
    histogram: Histogram,
}

/// Samples the spectral law of the variable: per sample the model matrix is
/// evaluated at a uniform sphere point and diagonalized; accumulators merge
/// in shard order, so the result is independent of the thread count.
pub fn mc_law(
    spec: &VariableSpec,
    samples: u64,
    seed: u64,
    max_order: u32,
    bins: usize,
) -> Result<McLawReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let t = if spec.kind.requires_t() {
        spec.t_f64()?
    } else {
        0.0
    };
    let compiled = CompiledMatrix::new(spec.kind, t);
    let (lo, hi) = histogram_range(spec);
    let shards = samples.div_ceil(SHARD_SIZE);

    let partials: Vec<Shard> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = seeded_rng(seed, shard);
            let lo_i = shard * SHARD_SIZE;
            let hi_i = ((shard + 1) * SHARD_SIZE).min(samples);
            let mut out = Shard {
                n: 0,
                rejected: 0,
                zero_count: 0,
                moment_acc: vec![(0.0, 0.0); max_order as usize],
                histogram: Histogram::new(lo, hi, bins),
            };
            for _ in lo_i..hi_i {
                let point = sample_sphere(&mut rng);
                let matrix = compiled.eval(point.coords());
                let eigen = match jacobi_eigenvalues(matrix) {
                    Ok(ev) => ev,
                    Err(_) => {
                        out.rejected += 1;
                        continue;
                    }
                };
                out.n += 1;
                for &ev in &eigen {
                    out.histogram.record(ev);
                    if ev.abs() < ZERO_EIGENVALUE_TOL {
                        out.zero_count += 1;
                    }
                }
                let mut power = [1.0f64; 4];
                for acc in out.moment_acc.iter_mut() {
                    for (pw, &ev) in power.iter_mut().zip(&eigen) {
                        *pw *= ev;
                    }
                    let trace_moment = 0.25 * power.iter().sum::<f64>();
                    let d = trace_moment - acc.0;
                    acc.0 += d / out.n as f64;
                    acc.1 += d * (trace_moment - acc.0);
                }
            }
            out
        })
        .collect();

    let mut total = Shard {
        n: 0,
        rejected: 0,
        zero_count: 0,
        moment_acc: vec![(0.0, 0.0); max_order as usize],
        histogram: Histogram::new(lo, hi, bins),
    };
    for shard in partials {
        total.rejected += shard.rejected;
        total.zero_count += shard.zero_count;
        total.histogram.merge(&shard.histogram);
        if shard.n == 0 {
            continue;
        }
        let n = total.n + shard.n;
        for (acc, other) in total.moment_acc.iter_mut().zip(&shard.moment_acc) {
            let d = other.0 - acc.0;
            acc.0 += d * shard.n as f64 / n as f64;
            acc.1 += other.1 + d * d * (total.n as f64 * shard.n as f64) / n as f64;
        }
        total.n = n;
    }

    let moments = total
        .moment_acc
        .iter()
        .map(|&(mean, m2)| {
            let stderr = if total.n >= 2 {
                (m2 / (total.n as f64 - 1.0) / total.n as f64).sqrt()
            } else {
                f64::NAN
            };
            McEstimate {
                mean,
                stderr,
                samples: total.n,
            }
        })
        .collect();

    Ok(McLawReport {
        variable: spec.kind.name().to_string(),
        seed,
        samples: total.n,
        rejected: total.rejected,
        moments,
        histogram: total.histogram,
        zero_eigenvalue_fraction: total.zero_count as f64 / (4 * total.n.max(1)) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::laws::exact_moments_up_to;

    #[test]
    fn jacobi_on_known_matrix() {
        // eigenvalues of diag(3,1,4,1) under an orthogonal conjugation by
        // a rotation in the (0,1) plane
        let (c, s) = (0.6f64, 0.8f64);
        let d = [3.0, 1.0, 4.0, 1.0];
        let mut m = [[0.0; 4]; 4];
        for r in 0..4 {
            m[r][r] = d[r];
        }
        // rotate rows/cols 0 and 1
        let mut a = m;
        a[0][0] = c * c * d[0] + s * s * d[1];
        a[1][1] = s * s * d[0] + c * c * d[1];
        a[0][1] = c * s * (d[0] - d[1]);
        a[1][0] = a[0][1];
        let ev = jacobi_eigenvalues(a).unwrap();
        let expected = [1.0, 1.0, 3.0, 4.0];
        for (got, want) in ev.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn m4_moments_match_exact() {
        let spec = VariableSpec::plain(VariableKind::M4);
        let report = mc_law(&spec, 100_000, 42, 4, 40).unwrap();
        assert_eq!(report.rejected, 0);
        let exact = exact_moments_up_to(VariableKind::M4, 4, 12).unwrap();
        for (k, est) in report.moments.iter().enumerate() {
            let target = exact[k].as_constant().unwrap().to_f64();
            assert!(
                (est.mean - target).abs() < 3.0 * est.stderr,
                "k={} got {} want {}",
                k + 1,
                est.mean,
                target
            );
        }
    }

    #[test]
    fn n3_second_moment() {
        let spec = VariableSpec::plain(VariableKind::N3);
        let report = mc_law(&spec, 200_000, 31, 2, 40).unwrap();
        assert!((report.moments[1].mean - 1.25).abs() < 2e-2);
    }

    #[test]
    fn w0_zero_eigenvalue_fraction() {
        let spec = VariableSpec::new(VariableKind::Wt, Some(Rational::zero())).unwrap();
        let report = mc_law(&spec, 50_000, 7, 1, 40).unwrap();
        assert!(
            (report.zero_eigenvalue_fraction - 0.5).abs() < 5e-3,
            "fraction={}",
            report.zero_eigenvalue_fraction
        );
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let spec = VariableSpec::plain(VariableKind::M4);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let single = pool.install(|| mc_law(&spec, 100_000, 5, 3, 20).unwrap());
        let multi = mc_law(&spec, 100_000, 5, 3, 20).unwrap();
        for (a, b) in single.moments.iter().zip(&multi.moments) {
            assert_eq!(a.mean.to_bits(), b.mean.to_bits());
            assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        }
        assert_eq!(single.histogram.counts, multi.histogram.counts);
    }
}
