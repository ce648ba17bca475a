//! Structure constants for exterior algebras on odd bigraded generators.
//!
//! Nilmanifold-style models are described by a handful of generators of
//! total degree one together with the value of each differential on the
//! generators; products and differentials of the full monomial basis follow
//! from graded commutativity and the Leibniz rule. This builder computes the
//! resulting structure-constant tables, either for the full `2^g`-dimensional
//! algebra or for a chosen span of monomials (which must be closed under
//! products and differentials).

use std::collections::HashMap;

use num::{One, Zero};

use crate::cbba::{Bidegree, CbbaModel, ModelError, K};

/// A wedge monomial: strictly increasing generator indices. Empty = unit.
pub type Monomial = Vec<usize>;

#[derive(Clone)]
pub struct ExteriorSpec {
    gens: Vec<(String, Bidegree)>,
    /// `del(gen) = Σ c · (two-generator monomial)`
    del: HashMap<usize, Vec<(K, Monomial)>>,
    delbar: HashMap<usize, Vec<(K, Monomial)>>,
    /// `conj(gen_i) = gen_{pairs[i]}`, used to derive a signed conjugation.
    conj: Option<Vec<usize>>,
}

impl ExteriorSpec {
    pub fn new(gens: Vec<(&str, i32, i32)>) -> Self {
        ExteriorSpec {
            gens: gens
                .into_iter()
                .map(|(s, p, q)| (s.to_string(), Bidegree::new(p, q)))
                .collect(),
            del: HashMap::new(),
            delbar: HashMap::new(),
            conj: None,
        }
    }

    pub fn gen_index(&self, name: &str) -> usize {
        self.gens
            .iter()
            .position(|(s, _)| s == name)
            .unwrap_or_else(|| panic!("unknown generator `{name}`"))
    }

    pub fn del(mut self, gen: &str, terms: Vec<(K, Vec<&str>)>) -> Self {
        let g = self.gen_index(gen);
        let terms = self.resolve_terms(terms);
        self.del.insert(g, terms);
        self
    }

    pub fn delbar(mut self, gen: &str, terms: Vec<(K, Vec<&str>)>) -> Self {
        let g = self.gen_index(gen);
        let terms = self.resolve_terms(terms);
        self.delbar.insert(g, terms);
        self
    }

    /// Marks generators as conjugate pairs, e.g. `[("x", "xbar"), ...]`.
    pub fn conjugate_pairs(mut self, pairs: Vec<(&str, &str)>) -> Self {
        let mut table: Vec<usize> = (0..self.gens.len()).collect();
        for (a, b) in pairs {
            let (i, j) = (self.gen_index(a), self.gen_index(b));
            table[i] = j;
            table[j] = i;
        }
        self.conj = Some(table);
        self
    }

    fn resolve_terms(&self, terms: Vec<(K, Vec<&str>)>) -> Vec<(K, Monomial)> {
        terms
            .into_iter()
            .map(|(c, names)| {
                let mut m: Monomial = names.iter().map(|n| self.gen_index(n)).collect();
                m.sort_unstable();
                (c, m)
            })
            .collect()
    }

    /// Builds the full exterior algebra on all monomials.
    pub fn model(&self) -> Result<CbbaModel, ModelError> {
        let g = self.gens.len();
        assert!(g <= 12, "full exterior algebra would be too large");
        let mut monomials: Vec<Monomial> = (0..(1u32 << g))
            .map(|mask| (0..g).filter(|i| mask & (1 << i) != 0).collect())
            .collect();
        monomials.sort_by_key(|m: &Monomial| (m.len(), m.clone()));
        self.span_model(monomials)
    }

    /// Builds the sub-model spanned by the given monomials. Fails when the
    /// span is not closed under products or differentials.
    pub fn span_model(&self, monomials: Vec<Monomial>) -> Result<CbbaModel, ModelError> {
        let index: HashMap<Monomial, usize> =
            monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        if !index.contains_key(&Monomial::new()) {
            return Err(ModelError::Construction("span must contain the unit monomial".into()));
        }
        let mut b = CbbaModel::builder();
        for m in &monomials {
            let bd = self.monomial_bidegree(m);
            b = b.basis_element(&self.monomial_name(m), bd.p, bd.q);
        }
        b = b.unit(&self.monomial_name(&Monomial::new()));

        // products; the builder mirrors (j,i) by graded commutativity
        for (i, mi) in monomials.iter().enumerate() {
            for (j, mj) in monomials.iter().enumerate() {
                if i > j || mi.is_empty() || mj.is_empty() {
                    continue;
                }
                let Some((sign, prod)) = wedge(mi, mj) else {
                    continue;
                };
                if !index.contains_key(&prod) {
                    return Err(ModelError::Construction(format!(
                        "span not closed under products: {}·{}",
                        self.monomial_name(mi),
                        self.monomial_name(mj)
                    )));
                }
                let c = if sign { -K::one() } else { K::one() };
                let prod_name = self.monomial_name(&prod);
                b = b.product(&self.monomial_name(mi), &self.monomial_name(mj), vec![(&prod_name, c)]);
            }
        }

        // differentials by the Leibniz rule
        for (which, table) in [(0, &self.del), (1, &self.delbar)] {
            for m in &monomials {
                let image = self.differentiate(m, table);
                let mut terms: Vec<(String, K)> = Vec::new();
                for (c, mono) in image {
                    if !index.contains_key(&mono) {
                        return Err(ModelError::Construction(format!(
                            "span not closed under differential of {}",
                            self.monomial_name(m)
                        )));
                    }
                    terms.push((self.monomial_name(&mono), c));
                }
                if terms.is_empty() {
                    continue;
                }
                let nm = self.monomial_name(m);
                let term_refs: Vec<(&str, K)> =
                    terms.iter().map(|(s, c)| (s.as_str(), c.clone())).collect();
                b = if which == 0 { b.del(&nm, term_refs) } else { b.delbar(&nm, term_refs) };
            }
        }

        // conjugation: map generators to their partners, resort, track sign
        if let Some(table) = &self.conj {
            let mut ok = true;
            let mut entries: Vec<(String, String, K)> = Vec::new();
            for m in &monomials {
                let mut mapped: Monomial = m.iter().map(|&a| table[a]).collect();
                let sign = sort_sign(&mut mapped);
                if mapped.windows(2).any(|w| w[0] == w[1]) || !index.contains_key(&mapped) {
                    ok = false;
                    break;
                }
                let c = if sign { -K::one() } else { K::one() };
                entries.push((self.monomial_name(m), self.monomial_name(&mapped), c));
            }
            if ok {
                for (a, bname, c) in entries {
                    b = b.conjugation(&a, &bname, c);
                }
            }
        }

        b.build()
    }

    pub fn monomial_name(&self, m: &Monomial) -> String {
        if m.is_empty() {
            return "1".to_string();
        }
        m.iter().map(|&i| self.gens[i].0.clone()).collect::<Vec<_>>().join("")
    }

    fn monomial_bidegree(&self, m: &Monomial) -> Bidegree {
        m.iter().fold(Bidegree::new(0, 0), |acc, &i| acc + self.gens[i].1)
    }

    /// Applies a generator-level differential to a monomial via Leibniz;
    /// since every generator is odd the Koszul sign at position `k` is
    /// `(-1)^k`.
    fn differentiate(
        &self,
        m: &Monomial,
        table: &HashMap<usize, Vec<(K, Monomial)>>,
    ) -> Vec<(K, Monomial)> {
        let mut out: HashMap<Monomial, K> = HashMap::new();
        for (pos, &gen) in m.iter().enumerate() {
            let Some(image) = table.get(&gen) else {
                continue;
            };
            let base_sign = pos % 2 == 1;
            for (c, repl) in image {
                let rest: Monomial = m.iter().copied().filter(|&a| a != gen).collect();
                let Some((s2, combined)) = wedge(repl, &rest) else {
                    continue;
                };
                let mut coeff = c.clone();
                if base_sign ^ s2 {
                    coeff = -coeff;
                }
                *out.entry(combined).or_insert_with(K::zero) += &coeff;
            }
        }
        let mut result: Vec<(K, Monomial)> = out
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (c, m))
            .collect();
        result.sort_by(|a, b| a.1.cmp(&b.1));
        result
    }
}

/// Wedge of two strictly increasing monomials: `None` on a repeated
/// generator, otherwise the merged monomial and whether the permutation
/// sign is negative.
pub fn wedge(a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
    let mut merged = a.to_vec();
    merged.extend_from_slice(b);
    let sign = sort_sign(&mut merged);
    if merged.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, merged))
}

/// Sorts in place, returning whether the permutation used is odd.
fn sort_sign(v: &mut Monomial) -> bool {
    let mut swaps = 0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    swaps % 2 == 1
}
