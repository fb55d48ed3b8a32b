use crate::algebra::{half, AlgebraSpec, GenKind, NcPoly};
use crate::brackets::{direct_sum_bundles, Bundle, DoubleBracketSpec, MomentMapSpec};
use crate::fusion::fuse_sequence;

use super::classification::nilpotent_free1;
use super::{cross_term, param_err, square_term, t2, word, CatalogResult, Params};

/// Genus `g`, `r` extra boundary components, optional orders `γ_k^{n_k} = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub genus: usize,
    pub boundaries: usize,
    pub weights: Option<Vec<u32>>,
}

impl SurfaceSpec {
    pub fn new(genus: usize, boundaries: usize) -> Self {
        SurfaceSpec { genus, boundaries, weights: None }
    }

    pub fn weighted(genus: usize, boundaries: usize, weights: Vec<u32>) -> Self {
        SurfaceSpec { genus, boundaries, weights: Some(weights) }
    }

    fn validate(&self) -> CatalogResult<()> {
        if self.genus + self.boundaries == 0 {
            return Err(param_err("g + r must be at least 1"));
        }
        if let Some(w) = &self.weights {
            if w.len() != self.boundaries {
                return Err(param_err(format!("{} weights given for {} boundary generators", w.len(), self.boundaries)));
            }
            if w.contains(&0) {
                return Err(param_err("weights n_k must be at least 1"));
            }
        }
        Ok(())
    }

    fn gamma_kind(&self, k: usize) -> GenKind {
        match &self.weights {
            Some(w) => GenKind::Cyclic(w[k]),
            None => GenKind::Invertible,
        }
    }

    fn from_params(p: &Params) -> CatalogResult<Self> {
        let genus = p.uint("genus")?.unwrap_or(0) as usize;
        let boundaries = p.uint("boundaries")?.unwrap_or(0) as usize;
        let weights = p
            .uint_list("weights")?
            .map(|w| w.into_iter().map(|n| u32::try_from(n).map_err(|_| param_err("weight too large"))).collect())
            .transpose()?;
        Ok(SurfaceSpec { genus, boundaries, weights })
    }
}

fn alpha(i: usize) -> String {
    format!("alpha{i}")
}

fn beta(i: usize) -> String {
    format!("beta{i}")
}

fn gamma(k: usize) -> String {
    format!("gamma{k}")
}

/// The torus block: `⟪α,α⟫ = ½(α²⊗1−1⊗α²)`, `⟪β,β⟫ = −½(β²⊗1−1⊗β²)`,
/// `⟪α,β⟫ = ½(βα⊗1 + 1⊗αβ − α⊗β + β⊗α)`.
fn torus_pairs(alg: &AlgebraSpec, br: &mut DoubleBracketSpec, a: &str, b: &str, unit: &str) -> CatalogResult<()> {
    let h = half();
    br.set_by_name(a, a, square_term(alg, a, unit, &h)?)?;
    br.set_by_name(b, b, square_term(alg, b, unit, &-h.clone())?)?;
    let (ba, ab) = (format!("{b} {a}"), format!("{a} {b}"));
    br.set_by_name(a, b, t2(alg, &[(h.clone(), &ba, unit), (h.clone(), unit, &ab), (-h.clone(), a, b), (h, b, a)])?)?;
    Ok(())
}

fn commutator(alg: &AlgebraSpec, a: &str, b: &str) -> CatalogResult<NcPoly> {
    word(alg, &format!("{a} {b} {a}^-1 {b}^-1"))
}

/// `𝕜π₁(Σ)` with `Φ = Π[α_i,β_i] Π γ_k` eliminated, and the closed-form bracket.
pub fn surface(spec: &SurfaceSpec) -> CatalogResult<Bundle> {
    spec.validate()?;
    let (g, r) = (spec.genus, spec.boundaries);
    let mut alg = AlgebraSpec::new(&["1"])?;
    // (name, block) in the order α₁, β₁, …, γ_r
    let mut order: Vec<(String, usize)> = Vec::new();
    for i in 1..=g {
        alg.add_generator(&alpha(i), "1", "1", GenKind::Invertible)?;
        alg.add_generator(&beta(i), "1", "1", GenKind::Invertible)?;
        order.push((alpha(i), i));
        order.push((beta(i), i));
    }
    for k in 1..=r {
        alg.add_generator(&gamma(k), "1", "1", spec.gamma_kind(k - 1))?;
        order.push((gamma(k), g + k));
    }
    let mut br = DoubleBracketSpec::zero(alg.clone());
    for i in 1..=g {
        torus_pairs(&alg, &mut br, &alpha(i), &beta(i), "1")?;
    }
    for k in 1..=r {
        br.set_by_name(&gamma(k), &gamma(k), square_term(&alg, &gamma(k), "1", &half())?)?;
    }
    for (x, (a, ba)) in order.iter().enumerate() {
        for (b, bb) in &order[x + 1..] {
            if ba != bb {
                br.set_by_name(a, b, cross_term(&alg, a, b, "1")?)?;
            }
        }
    }
    let mut phi = alg.one();
    for i in 1..=g {
        phi = alg.mul(&phi, &commutator(&alg, &alpha(i), &beta(i))?);
    }
    for k in 1..=r {
        phi = alg.mul(&phi, &word(&alg, &gamma(k))?);
    }
    let mm = MomentMapSpec::new(&alg, vec![phi])?;
    Ok(Bundle::new(br, Some(mm)))
}

/// `g` tori and `r` annuli, each fused onto the first block in turn.
pub fn surface_by_fusion(spec: &SurfaceSpec) -> CatalogResult<Bundle> {
    spec.validate()?;
    let (g, r) = (spec.genus, spec.boundaries);
    let mut blocks = Vec::new();
    for i in 1..=g {
        let label = i.to_string();
        let mut alg = AlgebraSpec::new(&[label.as_str()])?;
        alg.add_generator(&alpha(i), &label, &label, GenKind::Invertible)?;
        alg.add_generator(&beta(i), &label, &label, GenKind::Invertible)?;
        let mut br = DoubleBracketSpec::zero(alg.clone());
        torus_pairs(&alg, &mut br, &alpha(i), &beta(i), &format!("e{label}"))?;
        let mm = MomentMapSpec::new(&alg, vec![commutator(&alg, &alpha(i), &beta(i))?])?;
        blocks.push(Bundle::new(br, Some(mm)));
    }
    for k in 1..=r {
        let label = (g + k).to_string();
        let mut alg = AlgebraSpec::new(&[label.as_str()])?;
        alg.add_generator(&gamma(k), &label, &label, spec.gamma_kind(k - 1))?;
        let mut br = DoubleBracketSpec::zero(alg.clone());
        br.set(0, 0, square_term(&alg, &gamma(k), &format!("e{label}"), &half())?)?;
        let mm = MomentMapSpec::new(&alg, vec![alg.gen(0)])?;
        blocks.push(Bundle::new(br, Some(mm)));
    }
    let mut sum = blocks[0].clone();
    for b in &blocks[1..] {
        sum = direct_sum_bundles(&sum, b)?;
    }
    let steps: Vec<(String, String)> = (2..=g + r).map(|j| ("1".to_string(), j.to_string())).collect();
    let (br, mm) = fuse_sequence(&sum.bracket, sum.moment_map.as_ref(), &steps)?;
    Ok(Bundle::new(br, mm))
}

pub(super) fn surface_family(p: &Params, _check: bool) -> CatalogResult<Bundle> {
    surface(&SurfaceSpec::from_params(p)?)
}

pub(super) fn surface_fusion_family(p: &Params, _check: bool) -> CatalogResult<Bundle> {
    surface_by_fusion(&SurfaceSpec::from_params(p)?)
}

fn orders(orders: &[u32]) -> CatalogResult<()> {
    if orders.is_empty() {
        return Err(param_err("at least one order is required"));
    }
    if let Some(k) = orders.iter().find(|&&k| k < 3) {
        return Err(param_err(format!("order {k} must be at least 3")));
    }
    Ok(())
}

/// `𝕜⟨x_1..x_M⟩/(x_s^{k_s})` with `⟪x_s,x_s⟫ = ½(x_s²⊗1−1⊗x_s²)` and the cross term for `r < s`.
pub fn nilpotent_sum(ks: &[u32]) -> CatalogResult<Bundle> {
    orders(ks)?;
    let mut alg = AlgebraSpec::new(&["1"])?;
    let names: Vec<String> = (1..=ks.len()).map(|s| format!("x{s}")).collect();
    for (n, &k) in names.iter().zip(ks) {
        alg.add_generator(n, "1", "1", GenKind::Nilpotent(k))?;
    }
    let mut br = DoubleBracketSpec::zero(alg.clone());
    for (r, a) in names.iter().enumerate() {
        br.set_by_name(a, a, square_term(&alg, a, "1", &half())?)?;
        for b in &names[r + 1..] {
            br.set_by_name(a, b, cross_term(&alg, a, b, "1")?)?;
        }
    }
    Ok(Bundle::new(br, None))
}

/// Direct sum of truncated polynomial rings, fused onto the first unit.
pub fn nilpotent_sum_by_fusion(ks: &[u32]) -> CatalogResult<Bundle> {
    orders(ks)?;
    let mut sum: Option<Bundle> = None;
    for (s, &k) in ks.iter().enumerate() {
        let label = (s + 1).to_string();
        let block = nilpotent_free1(k, &half())?
            .with_labels(&[label.as_str()])?
            .with_generator_names(&[("x", &format!("x{}", s + 1))])?;
        sum = Some(match sum {
            None => block,
            Some(acc) => direct_sum_bundles(&acc, &block)?,
        });
    }
    let sum = sum.expect("nonempty");
    let steps: Vec<(String, String)> = (2..=ks.len()).map(|j| ("1".to_string(), j.to_string())).collect();
    let (br, _) = fuse_sequence(&sum.bracket, None, &steps)?;
    Ok(Bundle::new(br, None))
}

fn orders_param(p: &Params) -> CatalogResult<Vec<u32>> {
    let ks = p.uint_list("orders")?.ok_or_else(|| param_err("missing parameter `orders`"))?;
    ks.into_iter().map(|k| u32::try_from(k).map_err(|_| param_err("order too large"))).collect()
}

pub(super) fn nilpotent_sum_family(p: &Params, _check: bool) -> CatalogResult<Bundle> {
    nilpotent_sum(&orders_param(p)?)
}

pub(super) fn nilpotent_sum_fusion_family(p: &Params, _check: bool) -> CatalogResult<Bundle> {
    nilpotent_sum_by_fusion(&orders_param(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{check_moment_map, check_quasi_poisson, MomentCheckMode};
    use crate::catalog::bundle_differences;

    fn agree(a: &Bundle, b: &Bundle) {
        let d = bundle_differences(a, b).unwrap();
        assert!(d.is_empty(), "{d:#?}");
    }

    #[test]
    fn surfaces_match_fusion() {
        for (g, r) in [(0, 1), (1, 0), (1, 1), (2, 0)] {
            let spec = SurfaceSpec::new(g, r);
            let closed = surface(&spec).unwrap();
            agree(&closed, &surface_by_fusion(&spec).unwrap());
            assert!(check_quasi_poisson(&closed.bracket).unwrap().passed, "({g},{r})");
            let rep = check_moment_map(&closed.bracket, closed.moment_map.as_ref().unwrap(), &MomentCheckMode::Symbolic).unwrap();
            assert!(rep.passed, "({g},{r}) {:?}", rep.witnesses.first());
        }
        assert!(surface(&SurfaceSpec::new(0, 0)).is_err());
    }

    #[test]
    fn weighted_annulus() {
        let spec = SurfaceSpec::weighted(0, 1, vec![2]);
        let b = surface(&spec).unwrap();
        agree(&b, &surface_by_fusion(&spec).unwrap());
        assert!(check_quasi_poisson(&b.bracket).unwrap().passed);
        assert!(check_moment_map(&b.bracket, b.moment_map.as_ref().unwrap(), &MomentCheckMode::Symbolic).unwrap().passed);
        assert!(surface(&SurfaceSpec::weighted(0, 1, vec![])).is_err());
    }

    #[test]
    fn nilpotent_sums() {
        for ks in [vec![3], vec![3, 3], vec![3, 4, 5]] {
            let closed = nilpotent_sum(&ks).unwrap();
            agree(&closed, &nilpotent_sum_by_fusion(&ks).unwrap());
            assert!(check_quasi_poisson(&closed.bracket).unwrap().passed, "{ks:?}");
        }
        assert!(nilpotent_sum(&[2]).is_err());
    }
}
