use num_traits::{One, Zero};

use crate::algebra::{half, q, qi, AlgebraSpec, GenKind, NcPoly, Q};
use crate::brackets::{direct_sum, Bundle, DoubleBracketSpec, MomentMapSpec};
use crate::fusion::fuse_sequence;

use super::{param_err, square_term, t2, word, CatalogError, CatalogResult, Params};

fn is_half_unit(x: &Q) -> bool {
    *x == half() || *x == -half()
}

fn is_sign(x: &Q) -> bool {
    x.is_one() || *x == -Q::one()
}

fn one_vertex(gens: &[(&str, GenKind)]) -> CatalogResult<AlgebraSpec> {
    let mut alg = AlgebraSpec::new(&["1"])?;
    for (name, kind) in gens {
        alg.add_generator(name, "1", "1", kind.clone())?;
    }
    Ok(alg)
}

/// `λ(x⊗1−1⊗x) + μ(x²⊗1−1⊗x²) + ν(x²⊗x−x⊗x²)`.
fn one_variable(alg: &AlgebraSpec, x: &str, lambda: &Q, mu: &Q, nu: &Q) -> CatalogResult<crate::algebra::Tensor2> {
    let xx = format!("{x} {x}");
    let mut v = t2(alg, &[(lambda.clone(), x, "1"), (-lambda.clone(), "1", x)])?;
    v += square_term(alg, x, "1", mu)?;
    v += t2(alg, &[(nu.clone(), &xx, x), (-nu.clone(), x, &xx)])?;
    Ok(v)
}

pub fn free1_unchecked(lambda: &Q, mu: &Q, nu: &Q) -> CatalogResult<Bundle> {
    let alg = one_vertex(&[("t", GenKind::Plain)])?;
    let mut br = DoubleBracketSpec::zero(alg.clone());
    br.set(0, 0, one_variable(&alg, "t", lambda, mu, nu)?)?;
    Ok(Bundle::new(br, None))
}

/// `𝕜[t]` with the bracket of the one-variable classification; requires `4(μ²−λν) = 1`.
pub fn free1(lambda: &Q, mu: &Q, nu: &Q) -> CatalogResult<Bundle> {
    if qi(4) * (mu * mu - lambda * nu) != Q::one() {
        return Err(param_err(format!("4(μ²−λν) = 1 fails for λ={lambda}, μ={mu}, ν={nu}")));
    }
    free1_unchecked(lambda, mu, nu)
}

pub(super) fn free1_family(p: &Params, check: bool) -> CatalogResult<Bundle> {
    let (l, m, n) = (p.rational_or("lambda", Q::zero())?, p.rational_or("mu", half())?, p.rational_or("nu", Q::zero())?);
    if check {
        free1(&l, &m, &n)
    } else {
        free1_unchecked(&l, &m, &n)
    }
}

fn nilpotent_unchecked(k: u32, mu: &Q) -> CatalogResult<Bundle> {
    if k < 2 {
        return Err(param_err("nilpotency order must be at least 2"));
    }
    let alg = one_vertex(&[("x", GenKind::Nilpotent(k))])?;
    let mut br = DoubleBracketSpec::zero(alg.clone());
    br.set(0, 0, square_term(&alg, "x", "1", mu)?)?;
    Ok(Bundle::new(br, None))
}

/// `𝕜[x]/(x^k)` with `⟪x,x⟫ = μ(x²⊗1 − 1⊗x²)`, `k ≥ 3`, `μ = ±½`.
pub fn nilpotent_free1(k: u32, mu: &Q) -> CatalogResult<Bundle> {
    if k < 3 {
        return Err(param_err(format!("nilpotency order k = {k} must be at least 3")));
    }
    if !is_half_unit(mu) {
        return Err(param_err(format!("μ = {mu} must be ±1/2")));
    }
    nilpotent_unchecked(k, mu)
}

pub(super) fn nilpotent_family(p: &Params, check: bool) -> CatalogResult<Bundle> {
    let k = p.uint("k")?.unwrap_or(3);
    let k = u32::try_from(k).map_err(|_| param_err("k too large"))?;
    let mu = p.rational_or("mu", half())?;
    if check {
        nilpotent_free1(k, &mu)
    } else {
        nilpotent_unchecked(k, &mu)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Q1Case {
    C1a,
    C1b,
    C2,
    C3,
}

impl Q1Case {
    pub fn parse(s: &str) -> CatalogResult<Self> {
        match s {
            "1a" => Ok(Q1Case::C1a),
            "1b" => Ok(Q1Case::C1b),
            "2" => Ok(Q1Case::C2),
            "3" => Ok(Q1Case::C3),
            _ => Err(param_err(format!("unknown q1 case `{s}`; expected 1a, 1b, 2 or 3"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q1Params {
    pub delta: Q,
    pub gamma: Q,
    pub phi: Q,
    pub alpha: Q,
    pub lambda: Q,
    pub moment_map: bool,
}

impl Default for Q1Params {
    fn default() -> Self {
        Q1Params { delta: Q::one(), gamma: Q::zero(), phi: Q::zero(), alpha: half(), lambda: Q::one(), moment_map: false }
    }
}

fn q1_validate(case: Q1Case, p: &Q1Params) -> CatalogResult<()> {
    match case {
        Q1Case::C1b => {
            if &p.alpha * &p.alpha != q(1, 4) + &p.gamma * &p.phi {
                return Err(param_err(format!("α² = 1/4 + γφ fails for α={}, γ={}, φ={}", p.alpha, p.gamma, p.phi)));
            }
            if p.moment_map && !(&p.gamma * &p.phi).is_zero() {
                return Err(param_err("a moment map needs γφ = 0"));
            }
        }
        _ => {
            if !is_sign(&p.delta) {
                return Err(param_err(format!("δ = {} must be ±1", p.delta)));
            }
            if case != Q1Case::C1a && p.lambda.is_zero() {
                return Err(param_err("λ must be nonzero"));
            }
            if p.moment_map {
                return Err(param_err("only case 1b carries a moment map"));
            }
        }
    }
    Ok(())
}

/// Moment map data for case 1b: generator kinds plus extra formal inverses.
struct Q1Localization {
    invertible: bool,
    formal: Vec<(&'static str, &'static str, String)>,
    phi: [String; 2],
}

fn q1_localization(p: &Q1Params) -> CatalogResult<Q1Localization> {
    let delta = &p.alpha * qi(2);
    if !is_sign(&delta) {
        return Err(param_err("a moment map needs α = ±1/2"));
    }
    let plus = delta.is_one();
    if p.gamma.is_zero() {
        if p.phi.is_zero() {
            let (p1, p2) = if plus { ("t s", "t^-1 s^-1") } else { ("s^-1 t^-1", "s t") };
            return Ok(Q1Localization { invertible: true, formal: Vec::new(), phi: [p1.into(), p2.into()] });
        }
        // Φ₁ = (δφ e₁ + (ts)⁻¹)^{−δ}, Φ₂ = (δφ e₂ + (st)⁻¹)^{δ}
        let c = &delta * &p.phi;
        let d1 = format!("{c}|e1|s^-1 t^-1");
        let d2 = format!("{c}|e2|t^-1 s^-1");
        let (p1, p2) = if plus { ("inv_ts".to_string(), d2.clone()) } else { (d1.clone(), "inv_st".to_string()) };
        return Ok(Q1Localization { invertible: true, formal: vec![("inv_ts", "1", d1), ("inv_st", "2", d2)], phi: [p1, p2] });
    }
    // Φ₁ = (δγ e₁ + ts)^{δ}, Φ₂ = (δγ e₂ + st)^{−δ}
    let c = &delta * &p.gamma;
    let d1 = format!("{c}|e1|t s");
    let d2 = format!("{c}|e2|s t");
    let (p1, p2) = if plus { (d1.clone(), "inv_st".to_string()) } else { ("inv_ts".to_string(), d2.clone()) };
    Ok(Q1Localization { invertible: false, formal: vec![("inv_ts", "1", d1), ("inv_st", "2", d2)], phi: [p1, p2] })
}

/// `c·e + w` written as `c|e|w`, or a plain word.
fn affine(alg: &AlgebraSpec, s: &str) -> CatalogResult<NcPoly> {
    let parts: Vec<&str> = s.split('|').collect();
    match parts.as_slice() {
        [w] => word(alg, w),
        [c, e, w] => {
            let c = super::parse_rational(c).map_err(param_err)?;
            Ok(word(alg, e)?.scale(&c) + word(alg, w)?)
        }
        _ => Err(CatalogError::Structural(format!("bad affine element `{s}`"))),
    }
}

pub fn q1_unchecked(case: Q1Case, p: &Q1Params) -> CatalogResult<Bundle> {
    let loc = if p.moment_map && case == Q1Case::C1b { Some(q1_localization(p)?) } else { None };
    let kind = if loc.as_ref().is_some_and(|l| l.invertible) { GenKind::Invertible } else { GenKind::Plain };
    let mut alg = AlgebraSpec::new(&["1", "2"])?;
    alg.add_generator("t", "1", "2", kind.clone())?;
    alg.add_generator("s", "2", "1", kind)?;
    if let Some(l) = &loc {
        for (name, v, d) in &l.formal {
            let d = affine(&alg, d)?;
            alg.add_generator(name, v, v, GenKind::FormalInverse(d))?;
        }
    }
    let mut br = DoubleBracketSpec::zero(alg.clone());
    let h = half();
    let sign_pair = |alg: &AlgebraSpec| t2(alg, &[(&p.delta * &h, "s t", "e1"), (-(&p.delta * &h), "e2", "t s")]);
    match case {
        Q1Case::C1a => br.set(0, 1, sign_pair(&alg)?)?,
        Q1Case::C1b => br.set(
            0,
            1,
            t2(
                &alg,
                &[(p.gamma.clone(), "e2", "e1"), (p.phi.clone(), "s t", "t s"), (p.alpha.clone(), "s t", "e1"), (p.alpha.clone(), "e2", "t s")],
            )?,
        )?,
        Q1Case::C2 => {
            br.set(0, 0, t2(&alg, &[(p.lambda.clone(), "t s t", "t"), (-p.lambda.clone(), "t", "t s t")])?)?;
            br.set(0, 1, sign_pair(&alg)?)?;
        }
        Q1Case::C3 => {
            br.set(1, 1, t2(&alg, &[(p.lambda.clone(), "s t s", "s"), (-p.lambda.clone(), "s", "s t s")])?)?;
            br.set(0, 1, sign_pair(&alg)?)?;
        }
    }
    let mm = match &loc {
        Some(l) => Some(MomentMapSpec::new(&alg, vec![affine(&alg, &l.phi[0])?, affine(&alg, &l.phi[1])?])?),
        None => None,
    };
    Ok(Bundle::new(br, mm))
}

/// Brackets on the double of `1 → 2` (arrows `t: 1→2`, `s: 2→1`), by case.
pub fn q1(case: Q1Case, p: &Q1Params) -> CatalogResult<Bundle> {
    q1_validate(case, p)?;
    q1_unchecked(case, p)
}

fn q1_params(p: &Params) -> CatalogResult<(Q1Case, Q1Params)> {
    let case = Q1Case::parse(&p.string("case")?.unwrap_or_else(|| "1a".into()))?;
    let d = Q1Params::default();
    Ok((
        case,
        Q1Params {
            delta: p.rational_or("delta", d.delta)?,
            gamma: p.rational_or("gamma", d.gamma)?,
            phi: p.rational_or("phi", d.phi)?,
            alpha: p.rational_or("alpha", d.alpha)?,
            lambda: p.rational_or("lambda", d.lambda)?,
            moment_map: p.flag("moment_map")?,
        },
    ))
}

pub(super) fn q1_family(p: &Params, check: bool) -> CatalogResult<Bundle> {
    let (case, qp) = q1_params(p)?;
    if check {
        q1(case, &qp)
    } else {
        q1_unchecked(case, &qp)
    }
}

pub(super) fn q1_perturb(p: &Params) -> Option<&'static str> {
    match p.string("case").ok().flatten().as_deref() {
        Some("1b") => Some("alpha"),
        _ => Some("delta"),
    }
}

/// Zero brackets on `t: 1→2` and `s: 4→3`, glued `1~3`, `2~4`; the direction of each gluing picks the sign.
pub fn q1_by_fusion(delta: i32, delta_prime: i32) -> CatalogResult<Bundle> {
    if delta.abs() != 1 || delta_prime.abs() != 1 {
        return Err(param_err("δ and δ' must be ±1"));
    }
    let mut a = AlgebraSpec::new(&["1", "2"])?;
    a.add_generator("t", "1", "2", GenKind::Plain)?;
    let mut b = AlgebraSpec::new(&["3", "4"])?;
    b.add_generator("s", "4", "3", GenKind::Plain)?;
    let sum = direct_sum(&DoubleBracketSpec::zero(a), &DoubleBracketSpec::zero(b))?;
    let first = if delta == 1 { ("1", "3") } else { ("3", "1") };
    let second = if delta_prime == 1 { ("2", "4") } else { ("4", "2") };
    let steps: Vec<(String, String)> = [first, second].iter().map(|(k, a)| (k.to_string(), a.to_string())).collect();
    let (br, _) = fuse_sequence(&sum, None, &steps)?;
    let labels: Vec<&str> = br.algebra().idempotents().iter().map(|l| if l == "1" || l == "3" { "1" } else { "2" }).collect();
    Bundle::new(br, None).with_labels(&labels).map_err(Into::into)
}

pub(super) fn q1_fusion_family(p: &Params, _check: bool) -> CatalogResult<Bundle> {
    let sign = |key: &str| -> CatalogResult<i32> {
        let v = p.rational_or(key, Q::one())?;
        if v.is_one() {
            Ok(1)
        } else if v == -Q::one() {
            Ok(-1)
        } else {
            Err(param_err(format!("{key} must be ±1")))
        }
    };
    q1_by_fusion(sign("delta")?, sign("delta_prime")?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Free2Case(u8);

impl Free2Case {
    pub fn new(c: u64) -> CatalogResult<Self> {
        if (1..=7).contains(&c) {
            Ok(Free2Case(c as u8))
        } else {
            Err(param_err(format!("free2 case {c} is not in 1..7")))
        }
    }

    pub fn number(self) -> u8 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Free2Params {
    pub mu: Q,
    pub m: Q,
    pub alpha: Q,
    pub gamma0: Q,
    pub gamma1: Q,
    pub gamma: Q,
    pub n: Q,
    pub nu: Q,
    pub moment_map: bool,
}

impl Default for Free2Params {
    fn default() -> Self {
        Free2Params {
            mu: half(),
            m: half(),
            alpha: half(),
            gamma0: Q::zero(),
            gamma1: Q::zero(),
            gamma: Q::zero(),
            n: Q::one(),
            nu: Q::one(),
            moment_map: false,
        }
    }
}

fn free2_validate(case: Free2Case, p: &Free2Params) -> CatalogResult<()> {
    let need_half = |name: &str, x: &Q| {
        if is_half_unit(x) {
            Ok(())
        } else {
            Err(param_err(format!("{name} = {x} must be ±1/2")))
        }
    };
    let need_nonzero = |name: &str, x: &Q| if x.is_zero() { Err(param_err(format!("{name} must be nonzero"))) } else { Ok(()) };
    match case.0 {
        1 => {
            need_half("μ", &p.mu)?;
            if &p.alpha * &p.alpha != q(1, 4) + &p.gamma0 * &p.gamma1 {
                return Err(param_err("α² = 1/4 + γ₀γ₁ fails"));
            }
        }
        2 => {
            need_half("α", &p.alpha)?;
            need_half("μ", &p.mu)?;
        }
        3 => {
            need_half("m", &p.m)?;
            need_half("μ", &p.mu)?;
        }
        4 => {
            need_half("α", &p.alpha)?;
            need_half("m", &p.m)?;
            need_half("μ", &p.mu)?;
        }
        5 => {
            need_nonzero("n", &p.n)?;
            need_half("α", &p.alpha)?;
            need_half("μ", &p.mu)?;
        }
        6 => {
            need_nonzero("n", &p.n)?;
            need_half("μ", &p.mu)?;
        }
        _ => {
            need_nonzero("n", &p.n)?;
            need_nonzero("ν", &p.nu)?;
            need_half("α", &p.alpha)?;
        }
    }
    if p.moment_map && case.0 != 2 {
        return Err(param_err("only case 2 carries a moment map"));
    }
    Ok(())
}

pub fn free2_unchecked(case: Free2Case, p: &Free2Params) -> CatalogResult<Bundle> {
    let c = case.0;
    let delta = &p.alpha * qi(2);
    let local = p.moment_map && c == 2;
    if local && !is_sign(&delta) {
        return Err(param_err("a moment map needs α = ±1/2"));
    }
    let kind = if local && p.gamma.is_zero() { GenKind::Invertible } else { GenKind::Plain };
    let mut alg = one_vertex(&[("t", kind.clone()), ("s", kind)])?;
    // a = δγ + ts, b = δγ + st
    let dg = &delta * &p.gamma;
    let a = word(&alg, "1")?.scale(&dg) + word(&alg, "t s")?;
    let b = word(&alg, "1")?.scale(&dg) + word(&alg, "s t")?;
    if local && !p.gamma.is_zero() {
        alg.add_generator("inv_a", "1", "1", GenKind::FormalInverse(a.clone()))?;
        alg.add_generator("inv_b", "1", "1", GenKind::FormalInverse(b.clone()))?;
    }
    let zero = Q::zero();
    let (tt, ss) = match c {
        1 => (one_variable(&alg, "t", &zero, &p.mu, &zero)?, one_variable(&alg, "s", &zero, &p.mu, &zero)?),
        2 => (one_variable(&alg, "t", &zero, &p.mu, &zero)?, one_variable(&alg, "s", &zero, &-p.mu.clone(), &zero)?),
        3 | 4 => (one_variable(&alg, "t", &zero, &p.mu, &zero)?, one_variable(&alg, "s", &zero, &p.m, &zero)?),
        5 | 6 => (
            one_variable(&alg, "t", &zero, &p.mu, &zero)?,
            one_variable(&alg, "s", &(-q(1, 4) / &p.n), &zero, &p.n)?,
        ),
        _ => (
            one_variable(&alg, "t", &(-q(1, 4) / &p.nu), &zero, &p.nu)?,
            one_variable(&alg, "s", &(-q(1, 4) / &p.n), &zero, &p.n)?,
        ),
    };
    let al = p.alpha.clone();
    let mu = p.mu.clone();
    // st⊗1 − t⊗s − s⊗t + 1⊗ts, and st⊗1 − t⊗s + s⊗t − 1⊗ts
    let sym = |k: &Q| t2(&alg, &[(k.clone(), "s t", "1"), (-k.clone(), "t", "s"), (-k.clone(), "s", "t"), (k.clone(), "1", "t s")]);
    let anti = |k: &Q| t2(&alg, &[(k.clone(), "s t", "1"), (-k.clone(), "t", "s"), (k.clone(), "s", "t"), (-k.clone(), "1", "t s")]);
    let ts = match c {
        1 => t2(
            &alg,
            &[
                (p.gamma0.clone(), "t", "t"),
                (p.gamma1.clone(), "s", "s"),
                (mu.clone(), "s t", "1"),
                (-mu.clone(), "1", "t s"),
                (al.clone(), "t", "s"),
                (al.clone(), "s", "t"),
            ],
        )?,
        2 => t2(
            &alg,
            &[
                (al.clone(), "s t", "1"),
                (al.clone(), "1", "t s"),
                (mu.clone(), "s", "t"),
                (-mu.clone(), "t", "s"),
                (p.gamma.clone(), "1", "1"),
            ],
        )?,
        3 | 6 => anti(&mu)?,
        _ => sym(&al)?,
    };
    let mut br = DoubleBracketSpec::zero(alg.clone());
    br.set(0, 0, tt)?;
    br.set(1, 1, ss)?;
    br.set(0, 1, ts)?;
    let mm = if local {
        let plus = delta.is_one();
        let (ad, bd) = if p.gamma.is_zero() {
            // group-like: (ts)⁻¹ = s⁻¹t⁻¹, (st)⁻¹ = t⁻¹s⁻¹
            if plus {
                (word(&alg, "t s")?, word(&alg, "t^-1 s^-1")?)
            } else {
                (word(&alg, "s^-1 t^-1")?, word(&alg, "s t")?)
            }
        } else if plus {
            (a, word(&alg, "inv_b")?)
        } else {
            (word(&alg, "inv_a")?, b)
        };
        let phi = if mu == half() { alg.mul(&ad, &bd) } else { alg.mul(&bd, &ad) };
        Some(MomentMapSpec::new(&alg, vec![phi])?)
    } else {
        None
    };
    Ok(Bundle::new(br, mm))
}

/// `𝕜⟨s,t⟩` with the reduced quasi-Poisson brackets, cases 1–7.
pub fn free2(case: Free2Case, p: &Free2Params) -> CatalogResult<Bundle> {
    free2_validate(case, p)?;
    free2_unchecked(case, p)
}

fn free2_params(p: &Params) -> CatalogResult<(Free2Case, Free2Params)> {
    let case = Free2Case::new(p.uint("case")?.unwrap_or(1))?;
    let d = Free2Params::default();
    Ok((
        case,
        Free2Params {
            mu: p.rational_or("mu", d.mu)?,
            m: p.rational_or("m", d.m)?,
            alpha: p.rational_or("alpha", d.alpha)?,
            gamma0: p.rational_or("gamma0", d.gamma0)?,
            gamma1: p.rational_or("gamma1", d.gamma1)?,
            gamma: p.rational_or("gamma", d.gamma)?,
            n: p.rational_or("n", d.n)?,
            nu: p.rational_or("nu", d.nu)?,
            moment_map: p.flag("moment_map")?,
        },
    ))
}

pub(super) fn free2_family(p: &Params, check: bool) -> CatalogResult<Bundle> {
    let (case, fp) = free2_params(p)?;
    if check {
        free2(case, &fp)
    } else {
        free2_unchecked(case, &fp)
    }
}

pub(super) fn free2_perturb(p: &Params) -> Option<&'static str> {
    match p.uint("case").ok().flatten() {
        Some(3) | Some(6) => Some("mu"),
        _ => Some("alpha"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{check_cyclic_antisymmetry, check_moment_map, check_quasi_poisson, MomentCheckMode};
    use crate::representation::DimVector;

    fn qp(b: &Bundle) -> bool {
        check_quasi_poisson(&b.bracket).unwrap().passed
    }

    #[test]
    fn free1_grid_and_constraint() {
        for (l, m, n) in [(qi(0), half(), qi(0)), (qi(0), -half(), qi(0)), (qi(1), qi(0), q(-1, 4)), (qi(1), qi(1), q(3, 4))] {
            let b = free1(&l, &m, &n).unwrap();
            assert!(qp(&b), "λ={l} μ={m} ν={n}");
            assert!(check_cyclic_antisymmetry(&b.bracket, 50, 3).unwrap().passed);
        }
        assert!(matches!(free1(&qi(0), &qi(1), &qi(0)), Err(CatalogError::Parameter(_))));
        assert!(!qp(&free1_unchecked(&qi(0), &q(3, 2), &qi(0)).unwrap()));
    }

    #[test]
    fn nilpotent_truncates() {
        let b = nilpotent_free1(3, &half()).unwrap();
        assert!(qp(&b));
        let alg = b.algebra();
        let x = alg.gen(0);
        let v = b.bracket.eval(&x, &alg.mul(&x, &x)).unwrap();
        assert!(!v.is_zero());
        assert!(v.keys().all(|(a, c)| a.len() < 3 && c.len() < 3));
        assert!(nilpotent_free1(2, &half()).is_err());
    }

    #[test]
    fn q1_cases() {
        let d = Q1Params::default();
        for case in [Q1Case::C1a, Q1Case::C2, Q1Case::C3] {
            for delta in [qi(1), qi(-1)] {
                let b = q1(case, &Q1Params { delta, lambda: qi(2), ..d.clone() }).unwrap();
                assert!(qp(&b), "{case:?}");
            }
            assert!(!qp(&q1_unchecked(case, &Q1Params { delta: qi(2), ..d.clone() }).unwrap()));
        }
        let b = q1(Q1Case::C1b, &Q1Params { gamma: qi(2), phi: qi(1), alpha: q(3, 2), ..d.clone() }).unwrap();
        assert!(qp(&b));
        assert!(q1(Q1Case::C1b, &Q1Params { gamma: qi(2), phi: qi(1), alpha: half(), ..d.clone() }).is_err());
    }

    #[test]
    fn q1_case2_value() {
        let b = q1(Q1Case::C2, &Q1Params::default()).unwrap();
        let alg = b.algebra();
        assert_eq!(alg.fmt_t2(b.bracket.get(0, 0).unwrap()), "-t ⊗ t s t + t s t ⊗ t");
    }

    #[test]
    fn q1_moment_maps() {
        let d = Q1Params::default();
        let symbolic = q1(Q1Case::C1b, &Q1Params { moment_map: true, alpha: -half(), ..d.clone() }).unwrap();
        assert!(qp(&symbolic));
        let rep = check_moment_map(&symbolic.bracket, symbolic.moment_map.as_ref().unwrap(), &MomentCheckMode::Symbolic).unwrap();
        assert!(rep.passed, "{:?}", rep.witnesses);
        let mode = MomentCheckMode::Numeric { dims: DimVector::new(vec![1, 1]).unwrap(), trials: 3, seed: 7 };
        for (g, ph, al) in [(qi(1), qi(0), half()), (qi(1), qi(0), -half()), (qi(0), qi(2), half()), (qi(0), qi(2), -half())] {
            let b = q1(Q1Case::C1b, &Q1Params { gamma: g.clone(), phi: ph.clone(), alpha: al.clone(), moment_map: true, ..d.clone() })
                .unwrap();
            let rep = check_moment_map(&b.bracket, b.moment_map.as_ref().unwrap(), &mode).unwrap();
            assert!(rep.passed, "γ={g} φ={ph} α={al}: {:?}", rep.witnesses.first());
        }
    }

    #[test]
    fn q1_fusion_matches_case_1a() {
        for delta in [1, -1] {
            let fused = q1_by_fusion(delta, -delta).unwrap();
            let closed = q1(Q1Case::C1a, &Q1Params { delta: qi(delta as i64), ..Q1Params::default() }).unwrap();
            assert_eq!(super::super::bundle_differences(&closed, &fused).unwrap(), Vec::<String>::new());
        }
        assert!(qp(&q1_by_fusion(1, 1).unwrap()));
    }

    #[test]
    fn free2_cases() {
        let d = Free2Params::default();
        for c in 1..=7 {
            let case = Free2Case::new(c).unwrap();
            let b = free2(case, &d).unwrap();
            assert!(qp(&b), "case {c}");
            let key = free2_perturb(&Params::from_json(&serde_json::json!({"case": c})).unwrap()).unwrap();
            let mut p = d.clone();
            match key {
                "mu" => p.mu += qi(1),
                _ => p.alpha += qi(1),
            }
            assert!(!qp(&free2_unchecked(case, &p).unwrap()), "perturbed case {c}");
        }
        let b = free2(Free2Case::new(1).unwrap(), &Free2Params { gamma0: qi(2), gamma1: qi(1), alpha: q(-3, 2), ..d.clone() }).unwrap();
        assert!(qp(&b));
    }

    #[test]
    fn free2_case2_moment_maps() {
        let d = Free2Params::default();
        for mu in [half(), -half()] {
            for al in [half(), -half()] {
                let p = Free2Params { gamma: qi(0), mu: mu.clone(), alpha: al.clone(), moment_map: true, ..d.clone() };
                let b = free2(Free2Case::new(2).unwrap(), &p).unwrap();
                assert!(qp(&b));
                let rep = check_moment_map(&b.bracket, b.moment_map.as_ref().unwrap(), &MomentCheckMode::Symbolic).unwrap();
                assert!(rep.passed, "μ={mu} α={al}: {:?}", rep.witnesses.first());
                let p = Free2Params { gamma: qi(1), ..p };
                let b = free2(Free2Case::new(2).unwrap(), &p).unwrap();
                let mode = MomentCheckMode::Numeric { dims: DimVector::new(vec![2]).unwrap(), trials: 2, seed: 3 };
                let rep = check_moment_map(&b.bracket, b.moment_map.as_ref().unwrap(), &mode).unwrap();
                assert!(rep.passed, "γ=1 μ={mu} α={al}: {:?}", rep.witnesses.first());
            }
        }
    }
}
