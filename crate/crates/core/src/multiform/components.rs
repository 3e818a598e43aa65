//! Indexed components of multi-forms.
//!
//! A homogeneous bi-form of multidegree `(p,q)` is written
//! `1/(p!q!) th^{nu_1..nu_p} xi^{mu_1..mu_q} w_{mu_q..mu_1|nu_p..nu_1}` with
//! `w` antisymmetric within each index block. Summing over orderings, the
//! coefficient of the canonical monomial with ascending blocks is
//! `w` at the reversed blocks, i.e. `(-1)^{k(k-1)/2}` per block of length `k`
//! times `w` at the ascending blocks. Index blocks are listed sector by
//! sector in canonical order (`xi` block first), multidegrees from the last
//! sector to the first (`p` counts `th`).

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::FormError;
use crate::algebra::{Algebra, GradedElement, Monomial};
use crate::expr::{parse_with, Expr};
use crate::scalar::Coefficient;

/// Sparse component listing of one homogeneous part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentArray {
    pub multidegree: Vec<u32>,
    pub dim: usize,
    pub components: Vec<ComponentEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentEntry {
    pub indices: Vec<Vec<usize>>,
    pub coeff: String,
}

fn check_multiform(alg: &Algebra) -> Result<(), FormError> {
    let s = alg.sectors();
    let ok = s
        .iter()
        .all(|x| x.is_nilpotent() && x.dim() == alg.base_dim())
        && s.iter().enumerate().all(|(i, a)| {
            s[i + 1..]
                .iter()
                .all(|b| !a.degree().anticommutes(b.degree()))
        });
    if ok {
        Ok(())
    } else {
        Err(FormError::Shape {
            expected: "a multi-form algebra".to_string(),
        })
    }
}

fn block_sign(k: usize) -> bool {
    (k * k.saturating_sub(1) / 2) % 2 == 1
}

/// Sorts a block, returning whether the permutation was odd; `None` if an
/// index repeats.
fn sort_block(block: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut v = block.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((odd, v))
    }
}

fn monomial_of(alg: &Algebra, blocks: &[Vec<usize>]) -> Monomial {
    let mut e = vec![0u8; alg.formal_dim()];
    for (s, block) in blocks.iter().enumerate() {
        for &i in block {
            e[alg.position(s, i).expect("index checked")] = 1;
        }
    }
    Monomial::from_exponents(alg, &e).expect("distinct nilpotent indices")
}

fn check_blocks(alg: &Algebra, blocks: &[Vec<usize>]) -> Result<(), FormError> {
    if blocks.len() != alg.sectors().len() {
        return Err(FormError::Components(format!(
            "expected {} index blocks, got {}",
            alg.sectors().len(),
            blocks.len()
        )));
    }
    for block in blocks {
        if let Some(&bad) = block.iter().find(|&&i| i >= alg.base_dim()) {
            return Err(FormError::Components(format!(
                "index {bad} out of range for dimension {}",
                alg.base_dim()
            )));
        }
    }
    Ok(())
}

/// The component `w_{blocks}` for arbitrary (not necessarily sorted) index
/// blocks.
pub fn component<C: Coefficient>(
    omega: &GradedElement<C>,
    blocks: &[Vec<usize>],
) -> Result<C, FormError> {
    let alg = omega.algebra();
    check_multiform(alg)?;
    check_blocks(alg, blocks)?;
    let mut negative = false;
    let mut sorted = Vec::with_capacity(blocks.len());
    for block in blocks {
        match sort_block(block) {
            None => return Ok(C::zero()),
            Some((odd, v)) => {
                negative ^= odd ^ block_sign(v.len());
                sorted.push(v);
            }
        }
    }
    let c = omega
        .coefficient(&monomial_of(alg, &sorted))
        .cloned()
        .unwrap_or_else(C::zero);
    Ok(if negative { -c } else { c })
}

/// Builds the homogeneous multi-form with the given sector totals whose
/// component at ascending blocks is `f(blocks)`.
pub fn from_components<C, F>(
    alg: &Arc<Algebra>,
    totals: &[u32],
    mut f: F,
) -> Result<GradedElement<C>, FormError>
where
    C: Coefficient,
    F: FnMut(&[Vec<usize>]) -> C,
{
    check_multiform(alg)?;
    if totals.len() != alg.sectors().len() {
        return Err(FormError::Components(format!(
            "expected {} sector totals",
            alg.sectors().len()
        )));
    }
    let mut terms = Vec::new();
    for m in alg.monomials_with_totals(totals) {
        let blocks: Vec<Vec<usize>> = (0..totals.len())
            .map(|s| m.sector_indices(alg, s))
            .collect();
        let negative = blocks
            .iter()
            .fold(false, |acc, b| acc ^ block_sign(b.len()));
        let c = f(&blocks);
        terms.push((m, if negative { -c } else { c }));
    }
    Ok(GradedElement::from_terms(alg, terms))
}

/// Component listing of every homogeneous part, ordered by multidegree.
pub fn export_components(
    omega: &GradedElement<Expr>,
    coord_names: &[String],
) -> Result<Vec<ComponentArray>, FormError> {
    let alg = omega.algebra();
    check_multiform(alg)?;
    let mut parts: BTreeMap<Vec<u32>, Vec<ComponentEntry>> = BTreeMap::new();
    for (m, c) in omega.terms() {
        let totals = m.sector_totals(alg);
        let blocks: Vec<Vec<usize>> = (0..totals.len())
            .map(|s| m.sector_indices(alg, s))
            .collect();
        let negative = blocks
            .iter()
            .fold(false, |acc, b| acc ^ block_sign(b.len()));
        let c = if negative { -c.clone() } else { c.clone() };
        parts.entry(totals).or_default().push(ComponentEntry {
            indices: blocks,
            coeff: c.to_text(coord_names),
        });
    }
    Ok(parts
        .into_iter()
        .map(|(totals, components)| ComponentArray {
            multidegree: totals.into_iter().rev().collect(),
            dim: alg.base_dim(),
            components,
        })
        .collect())
}

/// Inverse of [`export_components`].
pub fn import_components(
    alg: &Arc<Algebra>,
    arrays: &[ComponentArray],
    coord_names: &[String],
    param_names: &[String],
) -> Result<GradedElement<Expr>, FormError> {
    check_multiform(alg)?;
    let mut terms = Vec::new();
    for array in arrays {
        if array.dim != alg.base_dim() {
            return Err(FormError::Components(format!(
                "dim {} does not match the chart dimension {}",
                array.dim,
                alg.base_dim()
            )));
        }
        let totals: Vec<u32> = array.multidegree.iter().rev().copied().collect();
        if totals.len() != alg.sectors().len() {
            return Err(FormError::Components(format!(
                "multidegree must have {} entries",
                alg.sectors().len()
            )));
        }
        for entry in &array.components {
            check_blocks(alg, &entry.indices)?;
            for (block, &t) in entry.indices.iter().zip(&totals) {
                if block.len() != t as usize {
                    return Err(FormError::Components(format!(
                        "block {block:?} does not match multidegree {:?}",
                        array.multidegree
                    )));
                }
                if block.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(FormError::Components(format!(
                        "block {block:?} is not strictly increasing"
                    )));
                }
            }
            let c = parse_with(&entry.coeff, coord_names, param_names).map_err(|e| {
                FormError::Components(format!("coefficient `{}`: {e}", entry.coeff))
            })?;
            let negative = entry
                .indices
                .iter()
                .fold(false, |acc, b| acc ^ block_sign(b.len()));
            terms.push((
                monomial_of(alg, &entry.indices),
                if negative { -c } else { c },
            ));
        }
    }
    Ok(GradedElement::from_terms(alg, terms))
}
