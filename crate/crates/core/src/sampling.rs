//! Seeded exact-rational sampling of group elements.
//!
//! The generator is SplitMix64. Integers in `[0, m)` are drawn as
//! `next_u64() % m`; a bounded-height rational is `p/q` with `p` uniform in
//! `[-h, h]` and `q` uniform in `[1, h]`, drawn in that order. Keeping the
//! recipe this literal makes seeds portable to other implementations.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::linalg::Mat;
use crate::liegroup::{Family, LieGroup};
use crate::scalar::Scalar;

pub const DEFAULT_HEIGHT: i64 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    G,
    B,
    T,
    U,
    RegularSemisimpleT,
    /// A torus element with a repeated eigenvalue (never the identity).
    NonRegularT,
}

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: SplitMix64,
    height: i64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: SplitMix64::seed_from_u64(seed), height: DEFAULT_HEIGHT }
    }

    pub fn with_height(mut self, height: i64) -> Self {
        assert!(height >= 1);
        self.height = height;
        self
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    pub fn ratio(&mut self) -> (i64, i64) {
        let p = self.int(-self.height, self.height);
        let q = self.int(1, self.height);
        (p, q)
    }

    pub fn rational<S: Scalar>(&mut self) -> S {
        let (p, q) = self.ratio();
        S::from_ratio(p, q)
    }

    pub fn nonzero_rational<S: Scalar>(&mut self) -> S {
        loop {
            let (p, q) = self.ratio();
            if p != 0 {
                return S::from_ratio(p, q);
            }
        }
    }

    pub fn vector<S: Scalar>(&mut self, len: usize) -> Vec<S> {
        (0..len).map(|_| self.rational()).collect()
    }

    /// Random element of the Lie algebra, as a matrix.
    pub fn algebra_element<S: Scalar>(&mut self, ctx: &LieGroup) -> Mat<S> {
        let c = self.vector(ctx.dim());
        ctx.from_coords(&c)
    }

    fn torus_diagonal<S: Scalar>(&mut self, ctx: &LieGroup) -> Vec<S> {
        let n = ctx.n();
        match ctx.family() {
            Family::Gl => (0..n).map(|_| self.nonzero_rational()).collect(),
            Family::Sl => {
                let mut d: Vec<S> = (0..n - 1).map(|_| self.nonzero_rational()).collect();
                let prod = d.iter().fold(S::one(), |acc, x| acc * x.clone());
                d.push(S::one() / prod);
                d
            }
        }
    }

    pub fn point<S: Scalar>(&mut self, ctx: &LieGroup, kind: PointKind) -> Mat<S> {
        let n = ctx.n();
        match kind {
            PointKind::T => Mat::diag(&self.torus_diagonal(ctx)),
            PointKind::RegularSemisimpleT => loop {
                let d: Vec<S> = self.torus_diagonal(ctx);
                let distinct = (0..n).all(|i| (i + 1..n).all(|j| d[i] != d[j]));
                if distinct {
                    break Mat::diag(&d);
                }
            },
            PointKind::NonRegularT => self.nonregular_torus(ctx),
            PointKind::U => self.unit_upper(n),
            PointKind::B => {
                let t: Mat<S> = self.point(ctx, PointKind::T);
                &t * &self.unit_upper(n)
            }
            PointKind::G => {
                let lower = self.unit_upper(n).transpose();
                let d: Mat<S> = self.point(ctx, PointKind::T);
                let upper = self.unit_upper(n);
                &(&lower * &d) * &upper
            }
        }
    }

    fn unit_upper<S: Scalar>(&mut self, n: usize) -> Mat<S> {
        let mut m = Mat::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                m[(i, j)] = self.rational();
            }
        }
        m
    }

    fn nonregular_torus<S: Scalar>(&mut self, ctx: &LieGroup) -> Mat<S> {
        let n = ctx.n();
        match (ctx.family(), n) {
            // the only non-identity non-regular element of the SL2 torus
            (Family::Sl, 2) => Mat::diag(&[S::from_i64(-1), S::from_i64(-1)]),
            _ => loop {
                let lambda: S = self.nonzero_rational();
                let mut d = vec![lambda.clone(), lambda];
                for _ in 2..n {
                    d.push(self.nonzero_rational());
                }
                if ctx.family() == Family::Sl {
                    let prod = d[..n - 1].iter().fold(S::one(), |acc, x| acc * x.clone());
                    d[n - 1] = S::one() / prod;
                }
                if d.iter().any(|x| *x != S::one()) {
                    break Mat::diag(&d);
                }
            },
        }
    }
}

/// One-shot sample from a fresh generator.
pub fn random_point<S: Scalar>(ctx: &LieGroup, kind: PointKind, seed: u64) -> Mat<S> {
    Sampler::new(seed).point(ctx, kind)
}
