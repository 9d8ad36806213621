//! Closed-form invariants.
//!
//! Covers Seifert fibered homology spheres, twist-knot surgeries with odd
//! numerator, and small Seifert spaces over S²(p,q,r) (PSL₂(C) value, the
//! Ben Abdelghani–Boyer character census, and the SL₂(C) value), plus
//! homology, connected sums and the λ₀ split.

use serde::Serialize;

use crate::arith::{self, floor_half, gcd, gcd_all, two_adic_split, QuarterRational};
use crate::manifold::{ManifoldExpr, ManifoldSpec, SeifertHSSpec, SmallSeifertSpec, TwistSurgerySpec};
use crate::snf::{smith_normal_form, two_torsion_order, AbelianGroup, IntMatrix};
use crate::{Error, Result};

/// 1 iff both arguments are even.
pub fn sigma_pair(m: i64, n: i64) -> i64 {
    (m % 2 == 0 && n % 2 == 0) as i64
}

/// 1 iff all three arguments are even.
pub fn sigma_triple(p: i64, q: i64, r: i64) -> i64 {
    (p % 2 == 0 && q % 2 == 0 && r % 2 == 0) as i64
}

fn half_gcd(a: i128, b: i128) -> Result<i128> {
    Ok(floor_half(gcd(a, b))?)
}

/// gcd(pq, pr, qr)
fn pairwise_product_gcd(p: i128, q: i128, r: i128) -> Result<i128> {
    Ok(gcd_all(&[arith::mul(p, q)?, arith::mul(p, r)?, arith::mul(q, r)?])?)
}

/// Σ over triples i₁<i₂<i₃ of (a_{i₁}−1)(a_{i₂}−1)(a_{i₃}−1)/4.
pub fn lambda_psl_seifert_hs(spec: &SeifertHSSpec) -> Result<QuarterRational> {
    let m: Vec<i128> = spec.multiplicities.iter().map(|&a| a as i128 - 1).collect();
    let mut quarters = 0i128;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            let mij = arith::mul(m[i], m[j])?;
            for k in j + 1..m.len() {
                quarters = arith::add(quarters, arith::mul(mij, m[k])?)?;
            }
        }
    }
    Ok(QuarterRational::from_quarters_wide(quarters)?)
}

/// p/q surgery on the twist knot K_ξ, p odd. Dispatches on the parity of ξ.
pub fn lambda_psl_twist(spec: &TwistSurgerySpec) -> Result<QuarterRational> {
    let (xi, p, q) = (spec.xi as i128, spec.p as i128, spec.q as i128);
    let abs = |v: i128| -> Result<i128> { Ok(arith::abs(v)?) };
    let quarters = if xi % 2 == 0 {
        // ξ|4q+p| + (ξ−2)|p| + 2|2ξq−p| − 2ξ
        let t1 = arith::mul(xi, abs(4 * q + p)?)?;
        let t2 = arith::mul(xi - 2, abs(p)?)?;
        let t3 = 2 * abs(arith::mul(2 * xi, q)? - p)?;
        t1 + t2 + t3 - 2 * xi
    } else {
        // (ξ−1)(|4q−p| + |p|) + 2|2ξq + 4q − p| − 2ξ
        let t1 = arith::mul(xi - 1, abs(4 * q - p)? + abs(p)?)?;
        let t2 = 2 * abs(arith::mul(2 * xi, q)? + 4 * q - p)?;
        t1 + t2 - 2 * xi
    };
    Ok(QuarterRational::from_quarters_wide(quarters)?)
}

/// PSL₂(C) character census of a small Seifert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CharacterCensus {
    pub reducible: i64,
    /// Image a dihedral group of order ≥ 4; includes the Klein-four characters.
    pub dihedral: i64,
    /// Characters conjugating into the Klein-four subgroup.
    pub klein: i64,
    pub total: i64,
    /// total − reducible − dihedral/2 − klein/4
    pub lambda_psl_from_census: QuarterRational,
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Arith(arith::ArithError::Overflow("census count")))
}

pub fn bb_census(spec: &SmallSeifertSpec) -> Result<CharacterCensus> {
    let (p, q, r) = (spec.p as i128, spec.q as i128, spec.r as i128);
    let homology = arith::abs(spec.homology_order_signed())?;
    let triple_gcd = gcd_all(&[p, q, r])?;
    let g = pairwise_product_gcd(p, q, r)?;

    let reducible = floor_half(homology)? + if triple_gcd % 2 == 0 { 2 } else { 1 };

    let (sp, sq, sr) = (spec.p, spec.q, spec.r);
    let sigma3 = sigma_triple(sp, sq, sr) as i128;
    let dihedral = sigma_pair(sq, sr) as i128 * floor_half(p)?
        + sigma_pair(sp, sr) as i128 * floor_half(q)?
        + sigma_pair(sp, sq) as i128 * floor_half(r)?
        - 2 * sigma3;

    let total = arith::mul(arith::mul(floor_half(p)?, floor_half(q)?)?, floor_half(r)?)?
        + arith::mul(arith::mul(floor_half(p - 1)?, floor_half(q - 1)?)?, floor_half(r - 1)?)?
        + floor_half(homology)?
        - floor_half(g)?
        + half_gcd(p, q)?
        + half_gcd(p, r)?
        + half_gcd(q, r)?
        + 1;

    let klein = sigma3;
    // 4·(total − reducible) − 2·dihedral − klein
    let quarters = arith::sub(arith::mul(4, arith::sub(total, reducible)?)?, 2 * dihedral + klein)?;
    Ok(CharacterCensus {
        reducible: narrow(reducible)?,
        dihedral: narrow(dihedral)?,
        klein: narrow(klein)?,
        total: narrow(total)?,
        lambda_psl_from_census: QuarterRational::from_quarters_wide(quarters)?,
    })
}

/// ¼(p−1)(q−1)(r−1) + [gcd(p,q)/2] + [gcd(p,r)/2] + [gcd(q,r)/2] − [gcd(pq,pr,qr)/2] − σ(p,q,r).
/// Independent of the Seifert coefficients.
pub fn lambda_psl_small_seifert(spec: &SmallSeifertSpec) -> Result<QuarterRational> {
    let (p, q, r) = (spec.p as i128, spec.q as i128, spec.r as i128);
    let cubic = arith::mul(arith::mul(p - 1, q - 1)?, r - 1)?;
    let corrections = half_gcd(p, q)? + half_gcd(p, r)? + half_gcd(q, r)?
        - floor_half(pairwise_product_gcd(p, q, r)?)?
        - sigma_triple(spec.p, spec.q, spec.r) as i128;
    let quarters = arith::add(cubic, arith::mul(4, corrections)?)?;
    Ok(QuarterRational::from_quarters_wide(quarters)?)
}

/// Cone orders sorted by descending 2-adic valuation and the resulting ξ coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlOrdering {
    pub orders: [i64; 3],
    pub valuations: [u32; 3],
    pub xi1: i64,
    pub xi2: i64,
    pub xi3: i64,
}

/// Stable sort by (descending valuation, descending order).
pub fn sl_ordering(spec: &SmallSeifertSpec) -> Result<SlOrdering> {
    let mut keyed = Vec::with_capacity(3);
    for n in spec.cone_orders() {
        keyed.push((two_adic_split(n as i128)?.0, n));
    }
    keyed.sort_by(|x, y| y.cmp(x));
    let orders = [keyed[0].1, keyed[1].1, keyed[2].1];
    let [alpha, beta, gamma] = [keyed[0].0, keyed[1].0, keyed[2].0];
    let xi1 = if beta > 0 { 2 } else { 1 };
    let xi2 = if gamma > 0 || (alpha == beta && alpha > 0) { 2 } else { 1 };
    // Doubled exactly when two of lcm/p, lcm/q, lcm/r are odd, i.e. the two
    // largest valuations tie above the third.
    let xi3 = if alpha == beta && beta > gamma { 2 } else { 1 };
    Ok(SlOrdering { orders, valuations: [alpha, beta, gamma], xi1, xi2, xi3 })
}

/// SL₂(C) invariant of a small Seifert space; always an integer.
pub fn lambda_sl_small_seifert(spec: &SmallSeifertSpec) -> Result<QuarterRational> {
    let ord = sl_ordering(spec)?;
    let [p, q, r] = ord.orders.map(|v| v as i128);
    let [sp, sq, sr] = ord.orders;
    let cubic = arith::mul(arith::mul(p - 1, q - 1)?, r - 1)?;
    let sigma_terms = sigma_pair(sp, sq) as i128 * (r - 1)
        + sigma_pair(sp, sr) as i128 * (q - 1)
        + sigma_pair(sq, sr) as i128 * (p - 1);
    let integral = ord.xi1 as i128 * half_gcd(p, q)?
        + ord.xi2 as i128 * half_gcd(p, r)?
        + ord.xi2 as i128 * half_gcd(q, r)?
        - ord.xi3 as i128 * floor_half(pairwise_product_gcd(p, q, r)?)?
        - 4 * sigma_triple(sp, sq, sr) as i128;
    let quarters = arith::add(arith::add(cubic, sigma_terms)?, arith::mul(4, integral)?)?;
    let value = QuarterRational::from_quarters_wide(quarters)?;
    if !value.is_integer() {
        return Err(Error::NonIntegralSl(value));
    }
    Ok(value)
}

/// Z/m₁ ⊕ Z/m₂ with m₁ = gcd(p,q,r), m₂ = |aqr+bpr+cpq|/m₁.
pub fn h1_small_seifert(spec: &SmallSeifertSpec) -> Result<AbelianGroup> {
    let m1 = gcd_all(&[spec.p as i128, spec.q as i128, spec.r as i128])?;
    let homology = arith::abs(spec.homology_order_signed())?;
    debug_assert_eq!(homology % m1, 0);
    let m2 = homology / m1;
    debug_assert_eq!(m2 % m1, 0);
    Ok(AbelianGroup::from_cyclic_orders(&[m1, m2])?)
}

/// Abelianized relation matrix on generators (x, y, h) of
/// ⟨x,y,z,h | h central, x^p = h^a, y^q = h^b, z^r = h^c, xyz = 1⟩ with z eliminated.
pub fn h1_presentation_matrix(spec: &SmallSeifertSpec) -> Result<IntMatrix> {
    let SmallSeifertSpec { p, q, r, a, b, c } = *spec;
    let [p, q, r, a, b, c] = [p, q, r, a, b, c].map(|v| v as i128);
    Ok(IntMatrix::from_rows(&[[p, 0, -a], [0, q, -b], [-r, -r, -c]])?)
}

pub fn h1_small_seifert_snf(spec: &SmallSeifertSpec) -> Result<AbelianGroup> {
    Ok(smith_normal_form(&h1_presentation_matrix(spec)?)?)
}

/// Z/|p|.
pub fn h1_twist_surgery(spec: &TwistSurgerySpec) -> Result<AbelianGroup> {
    Ok(AbelianGroup::cyclic(spec.p.unsigned_abs() as i128)?)
}

/// Flags attached to computed values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Caveat {
    /// The small Seifert closed forms assume a non-Haken manifold; this is not checked.
    NonHakenAssumed,
    /// Base orbifold S²(p,q,r) is spherical or euclidean.
    NonHyperbolicBase,
    /// λ_SL / |H¹(Σ;Z₂)| does not lie in (1/4)Z.
    LambdaZeroAnomaly,
}

impl Caveat {
    pub fn as_str(self) -> &'static str {
        match self {
            Caveat::NonHakenAssumed => "non-haken-assumed",
            Caveat::NonHyperbolicBase => "non-hyperbolic-base",
            Caveat::LambdaZeroAnomaly => "lambda-zero-anomaly",
        }
    }
}

/// Values of one leaf manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafInvariants {
    pub lambda_psl: QuarterRational,
    pub lambda_sl: QuarterRational,
    pub h1: AbelianGroup,
    pub caveats: Vec<Caveat>,
}

pub fn leaf_invariants(spec: &ManifoldSpec) -> Result<LeafInvariants> {
    match spec {
        ManifoldSpec::SeifertHS(s) => {
            let v = lambda_psl_seifert_hs(s)?;
            Ok(LeafInvariants { lambda_psl: v, lambda_sl: v, h1: AbelianGroup::trivial(), caveats: vec![] })
        }
        ManifoldSpec::TwistSurgery(s) => {
            let v = lambda_psl_twist(s)?;
            Ok(LeafInvariants { lambda_psl: v, lambda_sl: v, h1: h1_twist_surgery(s)?, caveats: vec![] })
        }
        ManifoldSpec::SmallSeifert(s) => {
            let mut caveats = vec![Caveat::NonHakenAssumed];
            if s.has_non_hyperbolic_base() {
                caveats.push(Caveat::NonHyperbolicBase);
            }
            Ok(LeafInvariants {
                lambda_psl: lambda_psl_small_seifert(s)?,
                lambda_sl: lambda_sl_small_seifert(s)?,
                h1: h1_small_seifert(s)?,
                caveats,
            })
        }
    }
}

/// Additive over connected sums.
pub fn lambda_psl_expr(expr: &ManifoldExpr) -> Result<QuarterRational> {
    match expr {
        ManifoldExpr::Leaf(spec) => Ok(leaf_invariants(spec)?.lambda_psl),
        ManifoldExpr::Sum(l, r) => Ok(lambda_psl_expr(l)?.checked_add(lambda_psl_expr(r)?)?),
    }
}

/// λ_SL(A#B) = |H¹(B;Z₂)|·λ_SL(A) + |H¹(A;Z₂)|·λ_SL(B), folded over the tree.
pub fn lambda_sl_expr(expr: &ManifoldExpr) -> Result<QuarterRational> {
    Ok(sl_and_two_torsion(expr)?.0)
}

fn sl_and_two_torsion(expr: &ManifoldExpr) -> Result<(QuarterRational, i64)> {
    match expr {
        ManifoldExpr::Leaf(spec) => {
            let leaf = leaf_invariants(spec)?;
            let h = two_torsion_order(&leaf.h1)?;
            Ok((leaf.lambda_sl, narrow(h)?))
        }
        ManifoldExpr::Sum(l, r) => {
            let (l_sl, l_h) = sl_and_two_torsion(l)?;
            let (r_sl, r_h) = sl_and_two_torsion(r)?;
            let sl = l_sl.checked_scale(r_h)?.checked_add(r_sl.checked_scale(l_h)?)?;
            let h = l_h.checked_mul(r_h).ok_or(arith::ArithError::Overflow("two-torsion product"))?;
            Ok((sl, h))
        }
    }
}

/// H₁ of a connected sum is the direct sum of the summands' H₁.
pub fn h1_expr(expr: &ManifoldExpr) -> Result<AbelianGroup> {
    match expr {
        ManifoldExpr::Leaf(spec) => Ok(leaf_invariants(spec)?.h1),
        ManifoldExpr::Sum(l, r) => Ok(h1_expr(l)?.direct_sum(&h1_expr(r)?)?),
    }
}

/// λ_PSL, λ_SL, H₁ and the split λ_PSL = λ₀ + residual.
///
/// λ₀ = λ_SL / |H¹(Σ;Z₂)| counts the w₂ = 0 part; the residual is only the
/// conjectured total over characters with w₂ ≠ 0 and is reported as such.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub manifold: String,
    pub lambda_psl: QuarterRational,
    pub lambda_sl: Option<QuarterRational>,
    pub h1: AbelianGroup,
    pub h1_z2_order: i64,
    pub lambda_zero: Option<QuarterRational>,
    pub residual: Option<QuarterRational>,
    pub caveats: Vec<Caveat>,
}

pub fn decompose_lambda_zero(expr: &ManifoldExpr) -> Result<InvariantReport> {
    let lambda_psl = lambda_psl_expr(expr)?;
    let (lambda_sl, h1_z2_order) = sl_and_two_torsion(expr)?;
    let h1 = h1_expr(expr)?;
    debug_assert_eq!(two_torsion_order(&h1)?, h1_z2_order as i128);

    let mut caveats: Vec<Caveat> = Vec::new();
    for leaf in expr.leaves() {
        caveats.extend(leaf_invariants(leaf)?.caveats);
    }
    let lambda_zero = lambda_sl.checked_div_int(h1_z2_order).ok();
    if lambda_zero.is_none() {
        caveats.push(Caveat::LambdaZeroAnomaly);
    }
    caveats.sort();
    caveats.dedup();
    let residual = match lambda_zero {
        Some(l0) => Some(lambda_psl.checked_sub(l0)?),
        None => None,
    };
    Ok(InvariantReport {
        manifold: expr.to_string(),
        lambda_psl,
        lambda_sl: Some(lambda_sl),
        h1,
        h1_z2_order,
        lambda_zero,
        residual,
        caveats,
    })
}
