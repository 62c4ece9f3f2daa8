//! The indicator tensor T(v_1,...,v_r) = ∏ (1 - f_{i,j,ℓ}^{q-1}) and its
//! diagonality check on avoiding sets.
//!
//! T is only ever evaluated pointwise. Expanding it as a polynomial is
//! hopeless even at small sizes; the monomial-counting side of the argument
//! lives in the bounds module instead.

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::{Matrix, Point};
use crate::pattern::{PatternSpec, PointSet, Witness};

pub const DEFAULT_EVAL_BUDGET: u128 = 1_000_000;

pub struct TensorContext {
    pattern: PatternSpec,
    n: usize,
    /// M_{i-1} M_1^{-1} for i = 3..r
    completions: Vec<Matrix>,
}

/// Outcome of evaluating T on all of A^r.
#[derive(Clone, Debug)]
pub struct DiagonalityReport {
    pub evaluations: u128,
    pub diagonal: bool,
    /// first tuple (in lexicographic order) where T disagrees with the
    /// diagonal shape, when one exists
    pub offender: Option<Vec<Point>>,
}

impl TensorContext {
    /// Pattern must already be validated full-rank.
    pub fn new(pattern: PatternSpec, n: usize) -> Result<Self> {
        if pattern.validation() != crate::pattern::Validation::FullRank {
            return Err(Error::Unvalidated);
        }
        let completions = pattern.completion_matrices()?;
        // cached products re-verified against a direct multiplication
        let m1_inv = pattern.generators()[0].inverse()?;
        for (c, m) in completions.iter().zip(&pattern.generators()[1..]) {
            assert_eq!(c, &m.mul(&m1_inv)?, "cached completion product mismatch");
        }
        Ok(TensorContext {
            pattern,
            n,
            completions,
        })
    }

    pub fn pattern(&self) -> &PatternSpec {
        &self.pattern
    }

    pub fn field(&self) -> &FieldSpec {
        self.pattern.field()
    }

    fn check_tuple(&self, tuple: &[Point]) -> Result<()> {
        if tuple.len() != self.pattern.r() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} points, got {}",
                self.pattern.r(),
                tuple.len()
            )));
        }
        for p in tuple {
            if p.field() != self.field() || p.k() != self.pattern.k() || p.n() != self.n {
                return Err(Error::DimensionMismatch("tuple point shape mismatch".into()));
            }
        }
        Ok(())
    }

    /// f_{i,j,ℓ} = v_i^(j)(ℓ) - v_1^(j)(ℓ) - (M_{i-1}M_1^{-1}(v_2 - v_1))^(j)(ℓ)
    /// with i in 3..=r, j in 1..=k, ℓ in 1..=n (all 1-based, as displayed).
    pub fn f_value(&self, tuple: &[Point], i: usize, j: usize, l: usize) -> Result<FieldElement> {
        self.check_tuple(tuple)?;
        let r = self.pattern.r();
        if !(3..=r).contains(&i) || !(1..=self.pattern.k()).contains(&j) || !(1..=self.n).contains(&l)
        {
            return Err(Error::InvalidParameter(format!(
                "f index (i={i}, j={j}, l={l}) out of range for r={r}, k={}, n={}",
                self.pattern.k(),
                self.n
            )));
        }
        let f = self.field();
        let base = tuple[1].sub(&tuple[0])?;
        let mapped = self.completions[i - 3].apply_block(&base)?;
        let lhs = f.sub(tuple[i - 1].coord(j - 1, l - 1), tuple[0].coord(j - 1, l - 1));
        Ok(f.sub(&lhs, mapped.coord(j - 1, l - 1)))
    }

    /// ∏_{i=3}^{r} ∏_{j} ∏_{ℓ} (1 - f_{i,j,ℓ}^{q-1}); always 0 or 1.
    pub fn eval(&self, tuple: &[Point]) -> Result<FieldElement> {
        self.check_tuple(tuple)?;
        let f = self.field();
        let q = f.q();
        let base = tuple[1].sub(&tuple[0])?;
        let mut product = f.one();
        for (ci, v) in self.completions.iter().zip(&tuple[2..]) {
            let mapped = ci.apply_block(&base)?;
            for j in 0..self.pattern.k() {
                for l in 0..self.n {
                    let fval = f.sub(
                        &f.sub(v.coord(j, l), tuple[0].coord(j, l)),
                        mapped.coord(j, l),
                    );
                    // 1 - f^{q-1} is 1 when f = 0 and 0 otherwise (Fermat)
                    let factor = f.sub(&f.one(), &f.pow(&fval, q - 1));
                    product = f.mul(&product, &factor);
                }
            }
        }
        Ok(product)
    }

    /// Evaluates T on all of A^r after re-certifying that A avoids the
    /// pattern. Confirms T = 1 exactly on constant tuples and 0 elsewhere.
    pub fn check_diagonal(&self, set: &PointSet, budget: u128) -> Result<DiagonalityReport> {
        let size = set.len() as u128;
        let needed = size.pow(self.pattern.r() as u32);
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        if let Some(w) = self.pattern.find_violation(set)? {
            return Err(Error::NotAvoiding(w.render()));
        }
        if set.is_empty() {
            return Ok(DiagonalityReport {
                evaluations: 0,
                diagonal: true,
                offender: None,
            });
        }
        let members = set.sorted_members();
        let r = self.pattern.r();
        let mut idx = vec![0usize; r];
        let mut evaluations = 0u128;
        let one = self.field().one();
        loop {
            let tuple: Vec<Point> = idx.iter().map(|&i| members[i].clone()).collect();
            let value = self.eval(&tuple)?;
            evaluations += 1;
            let constant = idx.iter().all(|&i| i == idx[0]);
            let expected_one = constant;
            if (value == one) != expected_one {
                return Ok(DiagonalityReport {
                    evaluations,
                    diagonal: false,
                    offender: Some(tuple),
                });
            }
            // odometer over A^r, last index fastest
            let mut pos = r;
            loop {
                if pos == 0 {
                    return Ok(DiagonalityReport {
                        evaluations,
                        diagonal: true,
                        offender: None,
                    });
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < members.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

/// Regression fact from the slice-rank definition: over GF(3), the tensor
/// xy + xz + yz agrees pointwise with the 2-slice decomposition
/// x(y + z) + y·z.
pub fn slice_example_check() -> bool {
    let f3 = FieldSpec::new(3, 1, None).expect("GF(3)");
    for xi in 0..3 {
        for yi in 0..3 {
            for zi in 0..3 {
                let (x, y, z) = (f3.from_index(xi), f3.from_index(yi), f3.from_index(zi));
                let lhs = f3.add(
                    &f3.add(&f3.mul(&x, &y), &f3.mul(&x, &z)),
                    &f3.mul(&y, &z),
                );
                let rhs = f3.add(&f3.mul(&x, &f3.add(&y, &z)), &f3.mul(&y, &z));
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Error-reporting helper: formats the instance found when the avoiding
/// precondition fails.
pub fn render_witness(w: &Witness) -> String {
    w.render()
}
