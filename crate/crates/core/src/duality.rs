//! The coordinate isomorphism `ρ : F_{q^{n_1}} × ... × F_{q^{n_s}} → F_q^n`,
//! the trace inner product and trace dual, and the conversions between
//! linear error-block codes and linear mixed orthogonal arrays.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::error_block::{BlockCode, Partition};
use crate::field::{self_dual_basis_exists, BaseField, ExtField};
use crate::linalg::{dot, Matrix};
use crate::moa::{q_pow, Linearity, MixedArray, SubsetIndex};

/// Membership of the trace dual is re-verified pairwise up to this much work.
pub const TRACE_DUAL_CHECK_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisPolicy {
    /// Self-dual bases wherever they exist, polynomial bases elsewhere.
    SelfDual,
    Polynomial,
}

/// Column fields with their chosen bases, Gram matrices and the induced
/// partition.
#[derive(Debug, Clone)]
pub struct RhoContext {
    fields: Vec<ExtField>,
    partition: Partition,
    block_gram: Matrix,
}

impl RhoContext {
    /// Uses the working basis of each field as given.
    pub fn new(fields: Vec<ExtField>) -> Result<Self> {
        let partition = Partition::new(fields.iter().map(ExtField::degree).collect())?;
        if let Some(i) = fields.iter().position(|f| {
            f.base().order() != fields[0].base().order() || f.base().modulus() != fields[0].base().modulus()
        }) {
            return Err(Error::FieldMismatch(i));
        }
        let grams: Vec<Matrix> = fields.iter().map(|f| f.basis().gram().clone()).collect();
        let block_gram = Matrix::block_diagonal(&grams);
        Ok(Self {
            fields,
            partition,
            block_gram,
        })
    }

    /// Default-modulus fields of degrees `n_1, ..., n_s` with bases chosen
    /// by `policy`.
    pub fn with_policy(base: Arc<BaseField>, partition: &Partition, policy: BasisPolicy) -> Result<Self> {
        let fields = partition
            .block_sizes()
            .iter()
            .map(|&m| ExtField::new(base.clone(), m, None))
            .collect::<Result<Vec<_>>>()?;
        Self::from_fields(&fields, policy)
    }

    /// Rebases the given fields according to `policy`.
    pub fn from_fields(fields: &[ExtField], policy: BasisPolicy) -> Result<Self> {
        let rebased = fields
            .iter()
            .map(|f| match policy {
                BasisPolicy::Polynomial => Ok(f.with_polynomial_basis()),
                BasisPolicy::SelfDual => Ok(f.with_self_dual_basis()?.unwrap_or_else(|| f.with_polynomial_basis())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rebased)
    }

    pub fn for_array(arr: &MixedArray, policy: BasisPolicy) -> Result<Self> {
        Self::from_fields(arr.fields(), policy)
    }

    pub fn for_code(code: &BlockCode, policy: BasisPolicy) -> Result<Self> {
        Self::with_policy(code.field_arc().clone(), code.partition(), policy)
    }

    pub fn fields(&self) -> &[ExtField] {
        &self.fields
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn base(&self) -> &BaseField {
        self.fields[0].base()
    }

    pub fn base_arc(&self) -> &Arc<BaseField> {
        self.fields[0].base_arc()
    }

    pub fn block_gram(&self) -> &Matrix {
        &self.block_gram
    }

    pub fn grams(&self) -> Vec<&Matrix> {
        self.fields.iter().map(|f| f.basis().gram()).collect()
    }

    /// Every column basis is self-dual, so `block_gram` is the identity.
    pub fn is_self_dual(&self) -> bool {
        self.fields.iter().all(|f| f.basis().is_self_dual())
    }

    /// Self-dual bases exist for every block (`q` even, or every `n_i` odd).
    pub fn self_dual_available(&self) -> bool {
        self.fields
            .iter()
            .all(|f| self_dual_basis_exists(f.base().order(), f.degree()))
    }

    /// Short description of the bases in use, one entry per column.
    pub fn basis_summary(&self) -> Vec<String> {
        self.fields
            .iter()
            .map(|f| {
                let b = f.basis();
                let kind = if b.is_self_dual() {
                    "self-dual"
                } else if b.is_polynomial() {
                    "polynomial"
                } else {
                    "custom"
                };
                format!("{kind} {:?}", b.elements())
            })
            .collect()
    }

    fn check_row(&self, row: &[u32]) -> Result<()> {
        if row.len() != self.fields.len() {
            return Err(Error::WrongLength {
                expected: self.fields.len(),
                got: row.len(),
            });
        }
        for (i, (&x, f)) in row.iter().zip(&self.fields).enumerate() {
            if !f.contains(x) {
                return Err(Error::AlphabetViolation {
                    value: x as u64,
                    size: f.order() as u64,
                    position: Some(i),
                    line: None,
                });
            }
        }
        Ok(())
    }

    /// `(ρ_1(a_1), ..., ρ_s(a_s))`.
    pub fn rho(&self, row: &[u32]) -> Result<Vec<u32>> {
        self.check_row(row)?;
        Ok(row
            .iter()
            .zip(&self.fields)
            .flat_map(|(&x, f)| f.coords(x))
            .collect())
    }

    pub fn rho_inverse(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.partition.n() {
            return Err(Error::WrongLength {
                expected: self.partition.n(),
                got: v.len(),
            });
        }
        (0..self.fields.len())
            .map(|i| self.fields[i].from_coords(self.partition.block(v, i)))
            .collect()
    }

    /// `Σ_i Tr_i(a_i b_i)`; in debug builds also checked against
    /// `ρ(a) · M · ρ(b)ᵀ`.
    pub fn trace_inner_product(&self, a: &[u32], b: &[u32]) -> Result<u32> {
        self.check_row(a)?;
        self.check_row(b)?;
        let base = self.base();
        let direct = a
            .iter()
            .zip(b)
            .zip(&self.fields)
            .fold(0, |acc, ((&x, &y), f)| base.add(acc, f.trace(f.mul(x, y))));
        debug_assert_eq!(direct, self.trace_inner_product_via_gram(a, b)?);
        Ok(direct)
    }

    /// `ρ(a) · M · ρ(b)ᵀ` with `M = diag(M_1, ..., M_s)`.
    pub fn trace_inner_product_via_gram(&self, a: &[u32], b: &[u32]) -> Result<u32> {
        let base = self.base();
        let ra = self.rho(a)?;
        let rb = self.rho(b)?;
        Ok(dot(&self.block_gram.left_mul(&ra, base), &rb, base))
    }

    fn check_array(&self, arr: &MixedArray) -> Result<()> {
        if arr.degrees() != self.partition.block_sizes() {
            return Err(Error::PartitionMismatch {
                expected: self.partition.block_sizes().to_vec(),
                got: arr.degrees(),
            });
        }
        if let Some(i) = arr
            .fields()
            .iter()
            .zip(&self.fields)
            .position(|(a, b)| !a.same_field(b))
        {
            return Err(Error::FieldMismatch(i));
        }
        Ok(())
    }

    fn check_code(&self, code: &BlockCode) -> Result<()> {
        if code.partition() != &self.partition {
            return Err(Error::PartitionMismatch {
                expected: self.partition.block_sizes().to_vec(),
                got: code.partition().block_sizes().to_vec(),
            });
        }
        if code.field().order() != self.base().order() || code.field().modulus() != self.base().modulus() {
            return Err(Error::FieldMismatch(0));
        }
        Ok(())
    }

    fn array_from_span(&self, gens: &Matrix, cap: u64) -> Result<MixedArray> {
        let size = q_pow(self.base().q(), gens.rows())?;
        if size > cap as u128 {
            return Err(Error::CapExceeded { size, cap });
        }
        let mut rows = Vec::with_capacity(size as usize);
        let mut failure = None;
        gens.for_each_in_span(self.base(), |v| match self.rho_inverse(v) {
            Ok(r) => rows.push(r),
            Err(e) => failure = Some(e),
        });
        if let Some(e) = failure {
            return Err(e);
        }
        rows.sort();
        Ok(MixedArray::new(self.fields.clone(), rows)?.with_linearity(Linearity::VerifiedLinear))
    }

    /// `ρ(arr)` as a code of type `[n_1]...[n_s]`.
    pub fn rho_code(&self, arr: &MixedArray) -> Result<BlockCode> {
        self.check_array(arr)?;
        let rows = arr.rows().iter().map(|r| self.rho(r)).collect::<Result<Vec<_>>>()?;
        BlockCode::new(self.partition.clone(), self.base_arc().clone(), &rows)
    }

    /// `{ b : ⟨c, b⟩_Tr = 0 for all rows c }`, computed as `ρ⁻¹` of the
    /// kernel of `G_ρ · M`.
    pub fn trace_dual(&self, arr: &MixedArray, cap: u64) -> Result<MixedArray> {
        self.check_array(arr)?;
        if !arr.is_linear() {
            return Err(Error::NotLinear);
        }
        let base = self.base();
        let g = self.rho_code(arr)?;
        let kernel = g.generator().mul(&self.block_gram, base).kernel(base);
        let dual = self.array_from_span(&kernel, cap)?;

        let n = self.partition.n();
        if q_pow(base.q(), n)? != arr.m() as u128 * dual.m() as u128 {
            return Err(Error::Inconsistent(format!(
                "|C| * |C^⊥Tr| = {} * {} is not q^{n}",
                arr.m(),
                dual.m()
            )));
        }
        if (arr.m() as u128) * (dual.m() as u128) <= TRACE_DUAL_CHECK_BUDGET {
            for c in arr.rows() {
                for b in dual.rows() {
                    if self.trace_inner_product(c, b)? != 0 {
                        return Err(Error::Inconsistent(format!(
                            "{b:?} is in the computed trace dual but not orthogonal to {c:?}"
                        )));
                    }
                }
            }
        }
        Ok(dual)
    }

    /// `ρ⁻¹(C)`, certified to have strength exactly `d_π(C^⊥) - 1`.
    pub fn moa_from_code(&self, code: &BlockCode, cap: u64) -> Result<MoaFromCode> {
        self.check_code(code)?;
        let array = self.array_from_span(code.generator(), cap)?;
        let dual = code.dual();
        let dual_distance = if dual.k() == 0 {
            None
        } else {
            Some(dual.min_pi_distance(cap)?)
        };
        let claimed = dual_distance.map_or(self.partition.s(), |d| d - 1);
        let indices = array.strength_evidence(claimed).map_err(|e| {
            Error::Inconsistent(format!("preimage lacks claimed strength {claimed}: {e}"))
        })?;
        let max_strength = array.max_strength();
        if max_strength != claimed {
            return Err(Error::Inconsistent(format!(
                "preimage has strength {max_strength}, expected exactly {claimed}"
            )));
        }
        Ok(MoaFromCode {
            array,
            certificate: StrengthCertificate {
                strength: claimed,
                dual_distance,
                max_strength,
                indices,
            },
        })
    }

    /// `ρ(arr)` for a linear array, certified by `d_π(ρ(C)^⊥) = t + 1`
    /// where `t` is the maximum strength.
    pub fn code_from_moa(&self, arr: &MixedArray, cap: u64) -> Result<CodeFromMoa> {
        self.check_array(arr)?;
        if !arr.is_linear() {
            return Err(Error::NotLinear);
        }
        let code = self.rho_code(arr)?;
        let max_strength = arr.max_strength();
        let dual = code.dual();
        let dual_distance = if dual.k() == 0 {
            None
        } else {
            Some(dual.min_pi_distance(cap)?)
        };
        let expected = (max_strength < self.partition.s()).then_some(max_strength + 1);
        if dual_distance != expected {
            return Err(Error::Inconsistent(format!(
                "strength {max_strength} but dual π-distance {dual_distance:?}"
            )));
        }
        Ok(CodeFromMoa {
            code,
            certificate: DualDistanceCertificate {
                max_strength,
                dual_distance,
            },
        })
    }

    /// Irredundancy of `ρ⁻¹(C)` and, when self-dual bases exist for every
    /// block, of `ρ⁻¹(C^⊥)`.
    pub fn irmoa_from_code(&self, code: &BlockCode, require_dual: bool, cap: u64) -> Result<IrmoaFromCode> {
        self.check_code(code)?;
        let n = code.n();
        if code.k() == 0 || code.k() == n {
            return Err(Error::ZeroCode);
        }
        let dual_code = code.dual();
        let d_pi = code.min_pi_distance(cap)?;
        let d_pi_dual = dual_code.min_pi_distance(cap)?;
        let t1 = d_pi_dual - 1;
        let t2 = d_pi - 1;
        if t1 + t2 > n {
            return Err(Error::Inconsistent(format!("t1 + t2 = {} exceeds n = {n}", t1 + t2)));
        }

        let primal = self.side(code, t1, d_pi >= d_pi_dual, cap)?;
        let available = self.self_dual_available();
        if require_dual && !available {
            return Err(Error::SelfDualBasisUnavailable {
                q: self.base().q(),
                sizes: self.partition.block_sizes().to_vec(),
            });
        }
        let (dual, both, trace_dual_matches) = if available {
            let dual = self.side(&dual_code, t2, d_pi_dual >= d_pi, cap)?;
            let both = primal.irredundant && dual.irredundant;
            if both != (d_pi == d_pi_dual) {
                return Err(Error::Inconsistent("both-sides irredundancy clause failed".into()));
            }
            let matches = if self.is_self_dual() {
                let td = self.trace_dual(&primal.array, cap)?;
                let ok = td.row_set() == dual.array.row_set();
                if !ok {
                    return Err(Error::Inconsistent(
                        "trace dual of ρ⁻¹(C) differs from ρ⁻¹(C^⊥) under self-dual bases".into(),
                    ));
                }
                Some(ok)
            } else {
                None
            };
            (Some(dual), Some(both), matches)
        } else {
            (None, None, None)
        };
        Ok(IrmoaFromCode {
            n,
            k: code.k(),
            d_pi,
            d_pi_dual,
            t1,
            t2,
            primal,
            dual,
            both_irredundant: both,
            trace_dual_matches,
        })
    }

    fn side(&self, code: &BlockCode, t: usize, expected: bool, cap: u64) -> Result<IrmoaSide> {
        let array = self.moa_from_code(code, cap)?.array;
        let irr = array.is_irredundant(t)?;
        if irr.irredundant != expected {
            return Err(Error::Inconsistent(format!(
                "preimage irredundant = {} but distance criterion predicts {expected}",
                irr.irredundant
            )));
        }
        Ok(IrmoaSide {
            strength: t,
            d_h: irr.d_h,
            irredundant: irr.irredundant,
            by_subarrays: irr.by_subarrays,
            array,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrengthCertificate {
    pub strength: usize,
    /// `None` when the dual is the zero code.
    pub dual_distance: Option<usize>,
    pub max_strength: usize,
    pub indices: Vec<SubsetIndex>,
}

#[derive(Debug, Clone)]
pub struct MoaFromCode {
    pub array: MixedArray,
    pub certificate: StrengthCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualDistanceCertificate {
    pub max_strength: usize,
    pub dual_distance: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CodeFromMoa {
    pub code: BlockCode,
    pub certificate: DualDistanceCertificate,
}

#[derive(Debug, Clone)]
pub struct IrmoaSide {
    pub array: MixedArray,
    pub strength: usize,
    pub d_h: Option<usize>,
    pub irredundant: bool,
    pub by_subarrays: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct IrmoaFromCode {
    pub n: usize,
    pub k: usize,
    pub d_pi: usize,
    pub d_pi_dual: usize,
    /// strength of `ρ⁻¹(C)`
    pub t1: usize,
    /// strength of `ρ⁻¹(C^⊥)`
    pub t2: usize,
    pub primal: IrmoaSide,
    pub dual: Option<IrmoaSide>,
    pub both_irredundant: Option<bool>,
    pub trace_dual_matches: Option<bool>,
}
