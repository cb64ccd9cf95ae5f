//! Reidemeister–Schreier presentations of subgroups from closed coset tables.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::intmat::Matrix;
use crate::presentation::Presentation;
use crate::word::{Alphabet, Gen, Word};
use crate::IntMatrix;

/// A prefix-closed set of coset representatives together with the spanning
/// tree it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    /// `words[c]` represents coset `c`.
    pub words: Vec<Word>,
    /// Cosets in the order they were reached.
    pub order: Vec<usize>,
    tree: HashSet<(usize, Gen)>,
}

impl Transversal {
    pub fn is_tree_edge(&self, coset: usize, g: Gen) -> bool {
        self.tree.contains(&(coset, g))
    }
}

/// Breadth-first search over positive generator edges in the given order.
///
/// In a closed table every generator acts as a permutation, so its inverse is
/// a positive power and the positive edges already reach every coset. The
/// representatives are therefore positive words.
pub fn schreier_transversal(table: &CosetTable, gen_order: &[Gen]) -> Result<Transversal> {
    if !table.is_closed() {
        return Err(Error::TableNotClosed);
    }
    let n = table.len();
    let mut words: Vec<Option<Word>> = vec![None; n];
    words[0] = Some(Word::identity());
    let mut order = vec![0];
    let mut tree = HashSet::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for &g in gen_order {
            let d = table.act(c, g, 1).ok_or(Error::TableNotClosed)?;
            if words[d].is_none() {
                let mut w = words[c].clone().expect("visited");
                w.push(g, 1);
                words[d] = Some(w);
                tree.insert((c, g));
                order.push(d);
                queue.push_back(d);
            }
        }
    }
    let words = words
        .into_iter()
        .map(|w| w.ok_or_else(|| Error::InvalidArgument("generator order misses a generator".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Transversal { words, order, tree })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchreierGenerator {
    pub name: String,
    pub coset: usize,
    pub generator: Gen,
    /// `t(c) g t(c g)^-1` in the parent alphabet, freely reduced.
    pub word: Word,
}

#[derive(Clone, Debug)]
pub struct SchreierData {
    pub transversal: Transversal,
    /// Generators of `presentation`, in the same order as its alphabet.
    pub generators: Vec<SchreierGenerator>,
    pub presentation: Presentation,
    pub index: usize,
}

/// Reidemeister–Schreier presentation of the subgroup whose cosets `table`
/// enumerates. The transversal follows the alphabet order of `pres`.
pub fn rs_presentation(pres: &Presentation, table: &CosetTable) -> Result<SchreierData> {
    let order: Vec<Gen> = pres.alphabet().gens().collect();
    rs_presentation_with_order(pres, table, &order)
}

/// As [`rs_presentation`] with an explicit generator order for the
/// breadth-first transversal.
pub fn rs_presentation_with_order(
    pres: &Presentation,
    table: &CosetTable,
    gen_order: &[Gen],
) -> Result<SchreierData> {
    if table.num_generators() != pres.num_generators() {
        return Err(Error::InvalidArgument("coset table and presentation disagree on generators".into()));
    }
    let transversal = schreier_transversal(table, gen_order)?;
    let mut generators = Vec::new();
    let mut lookup: HashMap<(usize, Gen), Gen> = HashMap::new();
    for &c in &transversal.order {
        for g in pres.alphabet().gens() {
            if transversal.is_tree_edge(c, g) {
                continue;
            }
            let d = table.act(c, g, 1).ok_or(Error::TableNotClosed)?;
            let word = transversal.words[c]
                .mul(&Word::generator(g))
                .mul(&transversal.words[d].inverse());
            if word.is_identity() {
                continue;
            }
            lookup.insert((c, g), Gen(generators.len() as u32));
            generators.push(SchreierGenerator {
                name: format!("x{}", generators.len() + 1),
                coset: c,
                generator: g,
                word,
            });
        }
    }
    let alphabet = Alphabet::new(generators.iter().map(|s| s.name.clone()))?;
    let mut relators = Vec::new();
    for &c in &transversal.order {
        for r in pres.relators() {
            let w = rewrite(table, &lookup, c, r)?;
            if !w.is_identity() {
                relators.push(w);
            }
        }
    }
    let presentation = Presentation::new(alphabet, relators)?;
    Ok(SchreierData { index: table.len(), transversal, generators, presentation })
}

/// Rewrites `t(coset) w t(coset)^-1` in the Schreier generators.
fn rewrite(
    table: &CosetTable,
    lookup: &HashMap<(usize, Gen), Gen>,
    coset: usize,
    w: &Word,
) -> Result<Word> {
    let mut out = Word::identity();
    let mut c = coset;
    for (g, s) in w.letters() {
        let d = table.act(c, g, s).ok_or(Error::TableNotClosed)?;
        let edge = if s > 0 { (c, g) } else { (d, g) };
        if let Some(&x) = lookup.get(&edge) {
            out.push(x, s);
        }
        c = d;
    }
    Ok(out)
}

/// Rewrites a word of the parent group lying in the subgroup. Errors if the
/// word does not return to the subgroup coset.
pub fn rewrite_subgroup_element(data: &SchreierData, table: &CosetTable, w: &Word) -> Result<Word> {
    let mut lookup = HashMap::new();
    for (i, s) in data.generators.iter().enumerate() {
        lookup.insert((s.coset, s.generator), Gen(i as u32));
    }
    if table.trace(0, w) != Some(0) {
        return Err(Error::InvalidArgument("word is not in the subgroup".into()));
    }
    rewrite(table, &lookup, 0, w)
}

/// Exponent-sum matrix: one row per relator, one column per generator.
pub fn relation_matrix(pres: &Presentation) -> IntMatrix {
    let rows = pres
        .relators()
        .iter()
        .map(|r| pres.alphabet().gens().map(|g| BigInt::from(r.exponent_sum(g))).collect())
        .collect();
    Matrix::from_rows_with_cols(rows, pres.num_generators()).expect("rows have one entry per generator")
}

// canonical representative up to rotation and inversion
fn cyclic_key(w: &Word) -> Word {
    w.cyclic_variants().into_iter().min().unwrap_or_default()
}

/// Position of a syllable `x^(+-1)` whose generator occurs nowhere else in
/// the (cyclically reduced) relator.
fn eliminable(r: &Word, protected: &HashSet<Gen>) -> Option<usize> {
    let syl = r.syllables();
    let mut count: HashMap<Gen, usize> = HashMap::new();
    for &(g, _) in syl {
        *count.entry(g).or_default() += 1;
    }
    // prefer the highest-numbered generator so earlier names survive
    syl.iter()
        .enumerate()
        .filter(|(_, &(g, e))| e.abs() == 1 && count[&g] == 1 && !protected.contains(&g))
        .max_by_key(|(_, &(g, _))| g)
        .map(|(i, _)| i)
}

fn normalize_relators(relators: Vec<Word>) -> Vec<Word> {
    let mut seen = HashSet::new();
    relators
        .into_iter()
        .map(|r| r.cyclically_reduced())
        .filter(|r| !r.is_identity())
        .filter(|r| seen.insert(cyclic_key(r)))
        .collect()
}

/// Tietze cleanup: relators are cyclically reduced and deduplicated up to
/// rotation and inversion, then generators that occur exactly once, with
/// exponent ±1, in some relator are solved for and substituted away
/// (shortest such relator first). Length-one relators `x` are the simplest
/// case of this and remove dead generators.
pub fn simplify(data: &SchreierData) -> Result<SchreierData> {
    simplify_keeping(data, |_| false)
}

/// As [`simplify`], but never eliminates generators for which `keep` holds.
pub fn simplify_keeping<F: Fn(&SchreierGenerator) -> bool>(data: &SchreierData, keep: F) -> Result<SchreierData> {
    let protected: HashSet<Gen> =
        (0..data.generators.len()).filter(|&i| keep(&data.generators[i])).map(|i| Gen(i as u32)).collect();
    let mut relators = normalize_relators(data.presentation.relators().to_vec());
    let mut alive: Vec<bool> = vec![true; data.generators.len()];
    loop {
        let pick = relators
            .iter()
            .enumerate()
            .filter_map(|(i, r)| eliminable(r, &protected).map(|pos| (r.letter_len(), i, pos)))
            .min_by_key(|&(len, i, _)| (len, i));
        let Some((_, ri, pos)) = pick else { break };
        let r = relators.remove(ri);
        let syl = r.syllables();
        let (x, e) = syl[pos];
        // r = u x^e v  =>  x^e = u^-1 v^-1  (cyclically: x^e = (v u)^-1)
        let rest = Word::from_syllables(syl[pos + 1..].iter().chain(syl[..pos].iter()).copied());
        let value = if e == 1 { rest.inverse() } else { rest };
        let mut images = HashMap::new();
        images.insert(x, value);
        relators = relators
            .iter()
            .map(|w| w.substitute_map(&images, true))
            .collect::<Result<Vec<_>>>()?;
        relators = normalize_relators(relators);
        alive[x.index()] = false;
    }
    let kept: Vec<usize> = (0..alive.len()).filter(|&i| alive[i]).collect();
    let mut renumber: HashMap<Gen, Word> = HashMap::new();
    for (new, &old) in kept.iter().enumerate() {
        renumber.insert(Gen(old as u32), Word::generator(Gen(new as u32)));
    }
    let relators = relators
        .iter()
        .map(|w| w.substitute_map(&renumber, false))
        .collect::<Result<Vec<_>>>()?;
    let generators: Vec<SchreierGenerator> = kept.iter().map(|&i| data.generators[i].clone()).collect();
    let alphabet = Alphabet::new(generators.iter().map(|s| s.name.clone()))?;
    Ok(SchreierData {
        transversal: data.transversal.clone(),
        generators,
        presentation: Presentation::new(alphabet, relators)?,
        index: data.index,
    })
}
