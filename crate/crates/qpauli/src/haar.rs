//! Exact integration of polynomials over the uniform measure on the unit
//! sphere in four dimensions, plus a seeded Monte Carlo sampler for
//! floating-point cross-checks.
//!
//! The exact moments come from Gaussianization: a uniform point on the
//! sphere scaled by an independent chi radial factor has independent
//! standard Gaussian coordinates, so sphere moments are Gaussian product
//! moments divided by the radial moments `2^n (n+1)!`.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{comb, Expt, Poly4, Rational, Scalar};

/// Exact sphere moment of a monomial `a^e0 b^e1 c^e2 d^e3`.
///
/// Zero if any exponent is odd; for exponents `(2p, 2q, 2r, 2s)` with
/// `n = p+q+r+s` the value is the product of odd double factorials
/// `(2e-1)!!` over the four half-exponents, divided by `2^n (n+1)!`.
pub fn sphere_moment(m: &Expt) -> Rational {
    if m.iter().any(|&e| e % 2 == 1) {
        return Rational::zero();
    }
    let mut num = BigInt::from(1);
    let mut n = 0u64;
    for &e in m {
        let half = (e / 2) as u64;
        num *= comb::odd_double_factorial(half);
        n += half;
    }
    let den = BigInt::from(2).pow(n as u32) * comb::factorial(n + 1);
    Rational::from_parts(num, den).expect("positive denominator")
}

/// The closed form `4^{-k}/(k+1)! * (2p)!(2k-2p)!/(p!(k-p)!)` for the sphere
/// moment of `a^{2(k-p)} b^{2p}`.
pub fn lemma81_moment(k: u64, p: u64) -> Result<Rational> {
    if p > k {
        return Err(Error::InvalidArgument(format!(
            "half-exponent p={p} exceeds k={k}"
        )));
    }
    let num = comb::factorial(2 * p) * comb::factorial(2 * (k - p));
    let den = BigInt::from(4).pow(k as u32)
        * comb::factorial(k + 1)
        * comb::factorial(p)
        * comb::factorial(k - p);
    Rational::from_parts(num, den).map_err(Into::into)
}

/// Linear extension of [`sphere_moment`] over all terms; coefficients may
/// carry the parameter `t`, which passes through untouched.
pub fn integrate_poly<C: Scalar>(p: &Poly4<C>) -> C {
    let mut acc = C::zero();
    for (e, c) in p.terms() {
        let m = sphere_moment(e);
        if !m.is_zero() {
            acc = acc.add(&c.mul_rational(&m));
        }
    }
    acc
}

/// Point on the unit 3-sphere.
#[derive(Clone, Copy, Debug)]
pub struct SpherePoint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl SpherePoint {
    pub fn coords(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }
}

/// Two independent standard Gaussians by the Marsaglia polar method.
fn gaussian_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    loop {
        let u = 2.0 * rng.gen::<f64>() - 1.0;
        let v = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (u * f, v * f);
        }
    }
}

/// Uniform sample on the sphere: a normalized 4-vector of independent
/// standard Gaussians. Deterministic given the generator state.
pub fn sample_sphere<R: Rng>(rng: &mut R) -> SpherePoint {
    loop {
        let (a, b) = gaussian_pair(rng);
        let (c, d) = gaussian_pair(rng);
        let n = (a * a + b * b + c * c + d * d).sqrt();
        if n > 1e-6 {
            let p = SpherePoint {
                a: a / n,
                b: b / n,
                c: c / n,
                d: d / n,
            };
            debug_assert!((p.norm_sq() - 1.0).abs() < 1e-12);
            return p;
        }
    }
}

/// The generator behind every stochastic routine in this crate: ChaCha12,
/// seeded with a caller-supplied 64-bit seed; shard `i` of a parallel run
/// uses stream `i` of the same seed.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Monte Carlo estimate with standard error.
#[derive(Clone, Copy, Debug)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

const SHARD_SIZE: u64 = 1 << 16;

#[derive(Clone, Copy)]
struct Accumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            n: 0,
            mean: 0.0,
            m2: 0.0,
        }
    }

    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination; order-independent up to the fixed
    /// shard ordering, so results do not depend on the thread count.
    fn merge(self, other: Accumulator) -> Accumulator {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Accumulator {
            n,
            mean: self.mean + d * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64,
        }
    }

    fn estimate(&self) -> McEstimate {
        let stderr = if self.n >= 2 {
            (self.m2 / (self.n as f64 - 1.0) / self.n as f64).sqrt()
        } else {
            f64::NAN
        };
        McEstimate {
            mean: self.mean,
            stderr,
            samples: self.n,
        }
    }
}

/// Mean and standard error of `f` over `n` uniform sphere samples.
///
/// Samples are split into fixed-size shards, each driven by its own stream
/// of the seed; the merge is sequential over shard index.
pub fn mc_integrate<F>(f: F, n: u64, seed: u64) -> McEstimate
where
    F: Fn(&SpherePoint) -> f64 + Sync,
{
    assert!(n >= 2, "need at least two samples for a standard error");
    let shards = n.div_ceil(SHARD_SIZE);
    let partials: Vec<Accumulator> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = seeded_rng(seed, shard);
            let lo = shard * SHARD_SIZE;
            let hi = ((shard + 1) * SHARD_SIZE).min(n);
            let mut acc = Accumulator::new();
            for _ in lo..hi {
                acc.push(f(&sample_sphere(&mut rng)));
            }
            acc
        })
        .collect();
    partials
        .into_iter()
        .fold(Accumulator::new(), Accumulator::merge)
        .estimate()
}
