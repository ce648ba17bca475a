//! A library of named models used by tests, fixtures and the CLI examples.
//!
//! The fixed models here are small enough to be checked by hand once and
//! then serve as regression anchors: the flat-torus algebra, elementary
//! bicomplex pieces, two standard nilmanifold-style algebras (Kodaira
//! surface, Iwasawa manifold), and two purpose-built models carrying
//! nontrivial secondary Massey products.

use num::{One, Zero};

use crate::cbba::{CbbaModel, ModelError, ValidatedModel, K};
use crate::exterior::{ExteriorSpec, Monomial};

fn k(n: i64) -> K {
    K::from_int(n)
}

fn validated(m: Result<CbbaModel, ModelError>) -> ValidatedModel {
    m.expect("sample model must build").validated().expect("sample model must validate")
}

/// Exterior algebra of the flat torus: generators `dz`, `dzbar`, zero
/// differentials, conjugation swapping them.
pub fn torus() -> ValidatedModel {
    let spec = ExteriorSpec::new(vec![("dz", 1, 0), ("dzbar", 0, 1)])
        .conjugate_pairs(vec![("dz", "dzbar")]);
    validated(spec.model())
}

/// Truncated polynomial ring `Q[g]/(g^{n+1})` with `g` in bidegree `(1,1)`
/// and zero differentials.
pub fn truncated_polynomial(n: usize) -> ValidatedModel {
    let ids: Vec<String> =
        (0..=n).map(|k| if k == 0 { "1".into() } else { format!("g^{k}") }).collect();
    let mut b = CbbaModel::builder();
    for (d, id) in ids.iter().enumerate() {
        b = b.basis_element(id, d as i32, d as i32);
    }
    b = b.unit("1");
    for i in 1..=n {
        for j in i..=n {
            if i + j <= n {
                b = b.product(&ids[i], &ids[j], vec![(ids[i + j].as_str(), k(1))]);
            }
        }
    }
    validated(b.build())
}

/// One anticommutativity square glued above bidegree `(p,q)`:
/// `u` with `del u = a`, `delbar u = b`, `del b = w = -delbar a`.
/// Its `del·delbar` image is spanned by `w`.
pub fn bicomplex_square(p: i32, q: i32) -> ValidatedModel {
    validated(bicomplex_square_raw(p, q))
}

fn bicomplex_square_raw(p: i32, q: i32) -> Result<CbbaModel, ModelError> {
    CbbaModel::builder()
        .basis_element("1", 0, 0)
        .basis_element("u", p, q)
        .basis_element("a", p + 1, q)
        .basis_element("b", p, q + 1)
        .basis_element("w", p + 1, q + 1)
        .unit("1")
        .del("u", vec![("a", k(1))])
        .delbar("u", vec![("b", k(1))])
        .del("b", vec![("w", k(1))])
        .delbar("a", vec![("w", k(-1))])
        .build()
}

/// Smallest model where the Bott-Chern to de Rham map is not injective:
/// `z = delbar v` is `del`- and `delbar`-closed, not `del·delbar`-exact,
/// yet `z = d v`.
pub fn corner() -> ValidatedModel {
    let b = CbbaModel::builder()
        .basis_element("1", 0, 0)
        .basis_element("v", 1, 0)
        .basis_element("z", 1, 1)
        .unit("1")
        .delbar("v", vec![("z", k(1))]);
    validated(b.build())
}

/// Kodaira-surface algebra: generators `w1, w2` of type `(1,0)` and their
/// conjugates, with `delbar w2 = w1 wb1` and `del wb2 = -w1 wb1`.
pub fn kodaira() -> ValidatedModel {
    let spec = ExteriorSpec::new(vec![("w1", 1, 0), ("w2", 1, 0), ("wb1", 0, 1), ("wb2", 0, 1)])
        .delbar("w2", vec![(k(1), vec!["w1", "wb1"])])
        .del("wb2", vec![(k(-1), vec!["w1", "wb1"])])
        .conjugate_pairs(vec![("w1", "wb1"), ("w2", "wb2")]);
    validated(spec.model())
}

fn iwasawa_spec() -> ExteriorSpec {
    ExteriorSpec::new(vec![
        ("w1", 1, 0),
        ("w2", 1, 0),
        ("w3", 1, 0),
        ("wb1", 0, 1),
        ("wb2", 0, 1),
        ("wb3", 0, 1),
    ])
    .del("w3", vec![(k(-1), vec!["w1", "w2"])])
    .delbar("wb3", vec![(k(-1), vec!["wb1", "wb2"])])
    .conjugate_pairs(vec![("w1", "wb1"), ("w2", "wb2"), ("w3", "wb3")])
}

/// Iwasawa-manifold algebra: holomorphic generators `w1, w2, w3` with
/// `del w3 = -w1 w2`, plus conjugates. 64-dimensional.
pub fn iwasawa() -> ValidatedModel {
    validated(iwasawa_spec().model())
}

/// Twelve-dimensional submodel of the Iwasawa algebra that carries a
/// nontrivial secondary triple product of three `(1,1)`-classes:
/// `⟨[w1 wb1], [w2 wb2], [w1 wb1] + [w1 wb2]⟩` with zero indeterminacy.
pub fn abc_nontrivial() -> ValidatedModel {
    // generator indices: w1=0, w2=1, w3=2, wb1=3, wb2=4, wb3=5
    let span: Vec<Monomial> = vec![
        vec![],
        vec![0, 3],          // w1 wb1
        vec![1, 4],          // w2 wb2
        vec![0, 4],          // w1 wb2
        vec![2, 5],          // w3 wb3
        vec![2, 3, 4],       // w3 wb1 wb2
        vec![0, 1, 5],       // w1 w2 wb3
        vec![0, 1, 3, 4],    // w1 w2 wb1 wb2
        vec![0, 2, 3, 5],    // w1 w3 wb1 wb3
        vec![1, 2, 4, 5],    // w2 w3 wb2 wb3
        vec![0, 2, 4, 5],    // w1 w3 wb2 wb3
        vec![0, 1, 2, 3, 4, 5],
    ];
    validated(iwasawa_spec().span_model(span))
}

/// Sixteen-dimensional model on which one triple of classes has both a
/// nonzero ordinary Massey product and a nonzero secondary one, so the
/// `d^c` comparison between them can be exercised nontrivially. Structure:
/// `del g3 = g1 g2`, `delbar g3 = g1 gb1`, `del g4 = -g2 g3`,
/// `delbar g4 = g3 gb1`.
pub fn massey_pair() -> ValidatedModel {
    // generator indices: g1=0, g2=1, g3=2, g4=3, gb1=4
    let spec = ExteriorSpec::new(vec![
        ("g1", 1, 0),
        ("g2", 1, 0),
        ("g3", 1, 0),
        ("g4", 1, 0),
        ("gb1", 0, 1),
    ])
    .del("g3", vec![(k(1), vec!["g1", "g2"])])
    .delbar("g3", vec![(k(1), vec!["g1", "gb1"])])
    .del("g4", vec![(k(-1), vec!["g2", "g3"])])
    .delbar("g4", vec![(k(1), vec!["g3", "gb1"])]);
    let span: Vec<Monomial> = vec![
        vec![],
        vec![0],             // g1
        vec![3],             // g4
        vec![1, 2],          // g2 g3
        vec![0, 3],          // g1 g4
        vec![1, 4],          // g2 gb1
        vec![2, 4],          // g3 gb1
        vec![0, 1, 4],       // g1 g2 gb1
        vec![0, 2, 4],       // g1 g3 gb1
        vec![2, 3, 4],       // g3 g4 gb1
        vec![1, 3, 4],       // g2 g4 gb1
        vec![0, 1, 2],       // g1 g2 g3
        vec![1, 2, 3],       // g2 g3 g4
        vec![0, 1, 3, 4],    // g1 g2 g4 gb1
        vec![0, 2, 3, 4],    // g1 g3 g4 gb1
        vec![0, 1, 2, 3],    // g1 g2 g3 g4
    ];
    validated(spec.span_model(span))
}

/// Model with a deliberate Leibniz violation: `x·y = w` but
/// `delbar w = t` while `x` and `y` are `delbar`-closed.
pub fn broken_leibniz() -> CbbaModel {
    CbbaModel::builder()
        .basis_element("1", 0, 0)
        .basis_element("x", 1, 0)
        .basis_element("y", 0, 1)
        .basis_element("w", 1, 1)
        .basis_element("t", 1, 2)
        .unit("1")
        .product("x", "y", vec![("w", k(1))])
        .delbar("w", vec![("t", k(1))])
        .build()
        .expect("builds structurally")
}

/// Model where `delbar² ≠ 0` on one generator.
pub fn broken_delbar_squared() -> CbbaModel {
    CbbaModel::builder()
        .basis_element("1", 0, 0)
        .basis_element("u", 0, 1)
        .basis_element("a", 0, 2)
        .basis_element("b", 0, 3)
        .unit("1")
        .delbar("u", vec![("a", k(1))])
        .delbar("a", vec![("b", k(1))])
        .build()
        .expect("builds structurally")
}

/// Minimal deterministic PRNG (splitmix64), enough for sample generation.
pub struct SampleRng(u64);

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        SampleRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// A random valid model: a direct sum of elementary bicomplex pieces (dots,
/// `del`-segments, `delbar`-segments, squares) at random bidegrees, with
/// trivial products and the basis order shuffled. Always validates clean.
pub fn random_bicomplex(seed: u64, max_dim: usize) -> ValidatedModel {
    let mut rng = SampleRng::new(seed);
    let target = 4 + (rng.below((max_dim.max(5) - 4) as u64) as usize);

    // (id, p, q), then differential entries referencing ids
    let mut basis: Vec<(String, i32, i32)> = vec![("1".into(), 0, 0)];
    let mut dels: Vec<(String, String, i64)> = Vec::new();
    let mut delbars: Vec<(String, String, i64)> = Vec::new();
    let mut piece = 0usize;
    while basis.len() < target {
        let p = rng.below(3) as i32;
        let q = rng.below(3) as i32;
        let tag = piece;
        piece += 1;
        let room = target - basis.len();
        let kind = match room {
            1 => 0,
            2 | 3 => rng.below(3),
            _ => rng.below(4),
        };
        match kind {
            0 => basis.push((format!("d{tag}"), p, q)),
            1 => {
                basis.push((format!("u{tag}"), p, q));
                basis.push((format!("v{tag}"), p + 1, q));
                let c = 1 + rng.below(3) as i64;
                dels.push((format!("u{tag}"), format!("v{tag}"), c));
            }
            2 => {
                basis.push((format!("u{tag}"), p, q));
                basis.push((format!("v{tag}"), p, q + 1));
                let c = 1 + rng.below(3) as i64;
                delbars.push((format!("u{tag}"), format!("v{tag}"), c));
            }
            _ => {
                basis.push((format!("u{tag}"), p, q));
                basis.push((format!("a{tag}"), p + 1, q));
                basis.push((format!("b{tag}"), p, q + 1));
                basis.push((format!("w{tag}"), p + 1, q + 1));
                dels.push((format!("u{tag}"), format!("a{tag}"), 1));
                delbars.push((format!("u{tag}"), format!("b{tag}"), 1));
                dels.push((format!("b{tag}"), format!("w{tag}"), 1));
                delbars.push((format!("a{tag}"), format!("w{tag}"), -1));
            }
        }
    }
    // shuffle everything except the unit
    for i in (2..basis.len()).rev() {
        let j = 1 + rng.below(i as u64) as usize;
        basis.swap(i, j);
    }
    let mut b = CbbaModel::builder();
    for (id, p, q) in &basis {
        b = b.basis_element(id, *p, *q);
    }
    b = b.unit("1");
    for (src, dst, c) in &dels {
        b = b.del(src, vec![(dst.as_str(), k(*c))]);
    }
    for (src, dst, c) in &delbars {
        b = b.delbar(src, vec![(dst.as_str(), k(*c))]);
    }
    validated(b.build())
}

/// Direct sum with one bicomplex square based at `(p,q)`: four fresh basis
/// elements `u0, a0, b0, w0` with `del u0 = a0`, `delbar u0 = b0`,
/// `del b0 = w0 = -delbar a0` and zero products against everything else.
/// Useful for perturbation tests: `w0 = del(delbar(-u0))` is an exact
/// element of bidegree `(p+1, q+1)`.
pub fn with_adjoined_square(model: &ValidatedModel, p: i32, q: i32) -> ValidatedModel {
    let n = model.dim();
    let mut b = CbbaModel::builder();
    for i in 0..n {
        let d = model.bidegree(i);
        b = b.basis_element(model.id(i), d.p, d.q);
    }
    b = b
        .basis_element("u0", p, q)
        .basis_element("a0", p + 1, q)
        .basis_element("b0", p, q + 1)
        .basis_element("w0", p + 1, q + 1)
        .unit(model.id(model.unit_index()));
    for i in 0..n {
        for j in 0..n {
            if i == model.unit_index() || j == model.unit_index() {
                continue;
            }
            let prod = model.basis_product(i, j);
            if prod.is_empty() {
                continue;
            }
            let terms: Vec<(String, K)> =
                prod.iter().map(|(t, c)| (model.id(*t).to_string(), c.clone())).collect();
            let refs: Vec<(&str, K)> = terms.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
            b = b.product(model.id(i), model.id(j), refs);
        }
    }
    for i in 0..n {
        let mut e = vec![K::zero(); n];
        e[i] = K::one();
        for (which, img) in [(0, model.del_vec(&e)), (1, model.delbar_vec(&e))] {
            let terms: Vec<(String, K)> = img
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t, c)| (model.id(t).to_string(), c))
                .collect();
            if terms.is_empty() {
                continue;
            }
            let refs: Vec<(&str, K)> = terms.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
            b = if which == 0 { b.del(model.id(i), refs) } else { b.delbar(model.id(i), refs) };
        }
    }
    b = b
        .del("u0", vec![("a0", K::one())])
        .delbar("u0", vec![("b0", K::one())])
        .del("b0", vec![("w0", K::one())])
        .delbar("a0", vec![("w0", -K::one())]);
    validated(b.build())
}

/// Rebuilds a model with its basis order shuffled; cohomology dimensions
/// must not depend on this.
pub fn permuted_clone(model: &ValidatedModel, seed: u64) -> ValidatedModel {
    let mut rng = SampleRng::new(seed);
    let n = model.dim();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below((i + 1) as u64) as usize;
        order.swap(i, j);
    }
    let mut b = CbbaModel::builder();
    for &i in &order {
        let d = model.bidegree(i);
        b = b.basis_element(model.id(i), d.p, d.q);
    }
    b = b.unit(model.id(model.unit_index()));
    let sparse_terms = |sv: &crate::cbba::SparseVec| -> Vec<(String, K)> {
        sv.iter().map(|(t, c)| (model.id(*t).to_string(), c.clone())).collect()
    };
    for i in 0..n {
        for j in 0..n {
            if i == model.unit_index() || j == model.unit_index() {
                continue;
            }
            let prod = model.basis_product(i, j);
            if !prod.is_empty() {
                let terms = sparse_terms(prod);
                let refs: Vec<(&str, K)> = terms.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
                b = b.product(model.id(i), model.id(j), refs);
            }
        }
    }
    for i in 0..n {
        let mut unit_vec = vec![K::zero(); n];
        unit_vec[i] = K::one();
        let del_terms: Vec<(String, K)> = model
            .del_vec(&unit_vec)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (model.id(t).to_string(), c))
            .collect();
        if !del_terms.is_empty() {
            let refs: Vec<(&str, K)> = del_terms.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
            b = b.del(model.id(i), refs);
        }
        let db_terms: Vec<(String, K)> = model
            .delbar_vec(&unit_vec)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (model.id(t).to_string(), c))
            .collect();
        if !db_terms.is_empty() {
            let refs: Vec<(&str, K)> = db_terms.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
            b = b.delbar(model.id(i), refs);
        }
    }
    if let Some(conj) = model.conjugation_table() {
        for (i, (t, s)) in conj.iter().enumerate() {
            b = b.conjugation(model.id(i), model.id(*t), s.clone());
        }
    }
    validated(b.build())
}
