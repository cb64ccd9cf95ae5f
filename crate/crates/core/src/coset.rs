//! Todd–Coxeter coset enumeration.
//!
//! Columns are interleaved: column `2g` is generator `g`, column `2g + 1` its
//! inverse. Coset `0` is the subgroup itself.
//!
//! Two strategies share one engine. `Hlt` scans every relator at every coset
//! in order, filling gaps with new cosets; `Felsch` defines the first
//! undefined entry and then chases every consequence. Both keep a deduction
//! stack and resolve coincidences with a union-find. Before a table is
//! returned it is checked to be complete and to trace every relator
//! trivially at every coset; a failed check triggers another filling pass.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{Alphabet, Gen, Word};

pub const DEFAULT_MAX_COSETS: usize = 100_000;

const UNDEF: u32 = u32::MAX;
const DEDUCTION_CAP: usize = 1 << 22;

#[inline]
fn inv(col: usize) -> usize {
    col ^ 1
}

fn word_cols(w: &Word) -> Vec<usize> {
    w.letters()
        .map(|(g, s)| if s > 0 { 2 * g.index() } else { 2 * g.index() + 1 })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Hlt,
    Felsch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub max_cosets: usize,
    pub strategy: Strategy,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { max_cosets: DEFAULT_MAX_COSETS, strategy: Strategy::default() }
    }
}

impl EnumerationOptions {
    pub fn with_max_cosets(max_cosets: usize) -> Self {
        EnumerationOptions { max_cosets, ..Default::default() }
    }
}

/// A coset table. Tables returned by enumeration are closed; partial tables
/// can be built by hand with [`CosetTable::from_rows`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    ngens: usize,
    entries: Vec<u32>,
}

impl CosetTable {
    /// `rows[c][col]` is the image of coset `c` under column `col`
    /// (generator `col / 2`, inverted when `col` is odd).
    pub fn from_rows(ngens: usize, rows: &[Vec<Option<usize>>]) -> Result<Self> {
        let ncols = 2 * ngens;
        let mut entries = Vec::with_capacity(rows.len() * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::InvalidArgument(format!(
                    "coset table row has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for e in row {
                match e {
                    Some(t) if *t >= rows.len() => {
                        return Err(Error::InvalidArgument(format!("coset {t} out of range")))
                    }
                    Some(t) => entries.push(*t as u32),
                    None => entries.push(UNDEF),
                }
            }
        }
        Ok(CosetTable { ngens, entries })
    }

    /// The regular action of a cyclic quotient `g -> shifts[g] mod modulus`.
    /// Coset `i` corresponds to residue `i`.
    pub fn from_cyclic_map(shifts: &[i64], modulus: i64) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let n = modulus as usize;
        let rows: Vec<Vec<Option<usize>>> = (0..n as i64)
            .map(|i| {
                shifts
                    .iter()
                    .flat_map(|&s| {
                        [
                            Some((i + s).rem_euclid(modulus) as usize),
                            Some((i - s).rem_euclid(modulus) as usize),
                        ]
                    })
                    .collect()
            })
            .collect();
        CosetTable::from_rows(shifts.len(), &rows)
    }

    pub fn len(&self) -> usize {
        if self.ngens == 0 {
            // a presentation without generators still has the one coset
            return 1;
        }
        self.entries.len() / (2 * self.ngens)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_generators(&self) -> usize {
        self.ngens
    }

    pub fn entry(&self, coset: usize, col: usize) -> Option<usize> {
        let e = self.entries[coset * 2 * self.ngens + col];
        (e != UNDEF).then_some(e as usize)
    }

    /// Image of `coset` under `g^sign`, with `sign` = ±1.
    pub fn act(&self, coset: usize, g: Gen, sign: i64) -> Option<usize> {
        let col = if sign > 0 { 2 * g.index() } else { 2 * g.index() + 1 };
        self.entry(coset, col)
    }

    pub fn is_closed(&self) -> bool {
        if self.entries.contains(&UNDEF) {
            return false;
        }
        let n = self.len();
        (0..self.ngens).all(|g| {
            let mut seen = vec![false; n];
            (0..n).all(|c| {
                let d = self.entries[c * 2 * self.ngens + 2 * g] as usize;
                let back = self.entries[d * 2 * self.ngens + 2 * g + 1] as usize;
                back == c && !std::mem::replace(&mut seen[d], true)
            })
        })
    }

    /// Follows `w` from `coset`; `None` if an undefined entry is hit.
    pub fn trace(&self, coset: usize, w: &Word) -> Option<usize> {
        let mut c = coset;
        for (g, s) in w.letters() {
            c = self.act(c, g, s)?;
        }
        Some(c)
    }

    /// Permutation induced by generator `g` on the cosets.
    pub fn permutation(&self, g: Gen) -> Vec<usize> {
        (0..self.len()).map(|c| self.act(c, g, 1).unwrap_or(usize::MAX)).collect()
    }

    /// Whether `w` fixes every coset. On a table for the trivial subgroup
    /// this decides whether `w` is the identity of the enumerated group.
    pub fn word_is_identity(&self, w: &Word) -> Result<bool> {
        if !self.is_closed() {
            return Err(Error::TableNotClosed);
        }
        if w.syllables().iter().any(|(g, _)| g.index() >= self.ngens) {
            return Err(Error::GeneratorOutOfRange { index: self.ngens, size: self.ngens });
        }
        Ok((0..self.len()).all(|c| self.trace(c, w) == Some(c)))
    }

    /// Renumbers cosets so that old coset `order[i]` becomes coset `i`.
    pub fn renumbered(&self, order: &[usize]) -> CosetTable {
        let n = self.len();
        let mut new_of = vec![0u32; n];
        for (i, &old) in order.iter().enumerate() {
            new_of[old] = i as u32;
        }
        let ncols = 2 * self.ngens;
        let mut entries = vec![UNDEF; n * ncols];
        for (i, &old) in order.iter().enumerate() {
            for col in 0..ncols {
                let e = self.entries[old * ncols + col];
                entries[i * ncols + col] = if e == UNDEF { UNDEF } else { new_of[e as usize] };
            }
        }
        CosetTable { ngens: self.ngens, entries }
    }

    /// One row per coset (1-based), one column per generator and inverse.
    pub fn to_csv(&self, alphabet: &Alphabet) -> String {
        let mut out = String::from("coset");
        for name in alphabet.names() {
            let _ = write!(out, ",{name},{name}^-1");
        }
        out.push('\n');
        for c in 0..self.len() {
            let _ = write!(out, "{}", c + 1);
            for col in 0..2 * self.ngens {
                match self.entry(c, col) {
                    Some(d) => {
                        let _ = write!(out, ",{}", d + 1);
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

enum Scan {
    Done,
    Full,
}

struct Enumerator {
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    max: usize,
    relators: Vec<Vec<usize>>,
    subgroup: Vec<Vec<usize>>,
    // rotations[col] = (relator, offset) with relators[relator][offset] == col
    rotations: Vec<Vec<(usize, usize)>>,
    deductions: Vec<(u32, u32)>,
    deductions_dropped: bool,
}

impl Enumerator {
    fn new(ngens: usize, relators: Vec<Vec<usize>>, subgroup: Vec<Vec<usize>>, max: usize) -> Self {
        let ncols = 2 * ngens;
        let mut rotations = vec![Vec::new(); ncols];
        for (r, rel) in relators.iter().enumerate() {
            for (off, &col) in rel.iter().enumerate() {
                rotations[col].push((r, off));
            }
        }
        Enumerator {
            ncols,
            table: vec![UNDEF; ncols],
            parent: vec![0],
            live: 1,
            max,
            relators,
            subgroup,
            rotations,
            deductions: Vec::new(),
            deductions_dropped: false,
        }
    }

    #[inline]
    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.ncols + col]
    }

    #[inline]
    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.ncols + col] = d;
    }

    fn allocated(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn find(&mut self, mut c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[c as usize] != root {
            let next = self.parent[c as usize];
            self.parent[c as usize] = root;
            c = next;
        }
        root
    }

    fn push_deduction(&mut self, c: u32, col: usize) {
        if self.deductions.len() >= DEDUCTION_CAP {
            self.deductions.clear();
            self.deductions_dropped = true;
        }
        self.deductions.push((c, col as u32));
    }

    fn define(&mut self, c: u32, col: usize) -> Option<u32> {
        if self.allocated() >= self.max {
            return None;
        }
        let d = self.allocated() as u32;
        self.table.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.parent.push(d);
        self.live += 1;
        self.set(c, col, d);
        self.set(d, inv(col), c);
        self.push_deduction(c, col);
        Some(d)
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let a = self.find(a);
        let b = self.find(b);
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi as usize] = lo;
        self.live -= 1;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut qi = 0;
        while qi < queue.len() {
            let g = queue[qi];
            qi += 1;
            for col in 0..self.ncols {
                let d = self.get(g, col);
                if d == UNDEF {
                    continue;
                }
                self.set(d, inv(col), UNDEF);
                let mu = self.find(g);
                let nu = self.find(d);
                let mu_x = self.get(mu, col);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x, &mut queue);
                    continue;
                }
                let nu_inv = self.get(nu, inv(col));
                if nu_inv != UNDEF {
                    self.merge(mu, nu_inv, &mut queue);
                    continue;
                }
                self.set(mu, col, nu);
                self.set(nu, inv(col), mu);
                self.push_deduction(mu, col);
            }
        }
    }

    /// Scans `seq` rotated by `off` starting at coset `c`. With `fill`, gaps
    /// longer than one letter are bridged by defining new cosets.
    fn scan(&mut self, c: u32, seq_ref: SeqRef, off: usize, fill: bool) -> Scan {
        let n = self.seq(seq_ref).len();
        let letter = |this: &Self, k: usize| this.seq(seq_ref)[(off + k) % n];
        let mut f = c;
        let mut b = c;
        let mut i = 0;
        let mut j = n;
        loop {
            while i < j {
                let t = self.get(f, letter(self, i));
                if t == UNDEF {
                    break;
                }
                f = t;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Scan::Done;
            }
            while j > i {
                let t = self.get(b, inv(letter(self, j - 1)));
                if t == UNDEF {
                    break;
                }
                b = t;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Scan::Done;
            }
            let x = letter(self, i);
            if j == i + 1 {
                self.set(f, x, b);
                self.set(b, inv(x), f);
                self.push_deduction(f, x);
                return Scan::Done;
            }
            if !fill {
                return Scan::Done;
            }
            if self.define(f, x).is_none() {
                return Scan::Full;
            }
        }
    }

    fn seq(&self, r: SeqRef) -> &[usize] {
        match r {
            SeqRef::Relator(i) => &self.relators[i],
            SeqRef::Subgroup(i) => &self.subgroup[i],
        }
    }

    fn process_deductions(&mut self) {
        while let Some((c, col)) = self.deductions.pop() {
            let col = col as usize;
            if !self.is_live(c) {
                continue;
            }
            let d = self.get(c, col);
            if d == UNDEF {
                continue;
            }
            for k in 0..self.rotations[col].len() {
                if !self.is_live(c) {
                    break;
                }
                let (r, off) = self.rotations[col][k];
                self.scan(c, SeqRef::Relator(r), off, false);
            }
            let d = self.find(d);
            for k in 0..self.rotations[inv(col)].len() {
                if !self.is_live(d) {
                    break;
                }
                let (r, off) = self.rotations[inv(col)][k];
                self.scan(d, SeqRef::Relator(r), off, false);
            }
        }
    }

    /// Scans every relator at every live coset without defining anything.
    fn lookahead(&mut self) {
        let mut c = 0;
        while c < self.allocated() as u32 {
            for r in 0..self.relators.len() {
                if !self.is_live(c) {
                    break;
                }
                self.scan(c, SeqRef::Relator(r), 0, false);
            }
            self.process_deductions();
            c += 1;
        }
    }

    /// Drops dead cosets, preserving order. Returns the new index of `keep`
    /// (or of the first live coset after it).
    fn compact(&mut self, keep: u32) -> u32 {
        let n = self.allocated();
        let mut new_of = vec![UNDEF; n];
        let mut next = 0u32;
        let mut keep_new = None;
        for c in 0..n {
            if c as u32 >= keep && keep_new.is_none() {
                keep_new = Some(next);
            }
            if self.parent[c] == c as u32 {
                new_of[c] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..n {
            if self.parent[c] != c as u32 {
                continue;
            }
            for col in 0..self.ncols {
                let e = self.table[c * self.ncols + col];
                table.push(if e == UNDEF { UNDEF } else { new_of[self.find(e) as usize] });
            }
        }
        let deductions = std::mem::take(&mut self.deductions);
        self.deductions = deductions
            .into_iter()
            .filter(|&(c, _)| self.parent[c as usize] == c)
            .map(|(c, col)| (new_of[c as usize], col))
            .collect();
        self.table = table;
        self.parent = (0..next).collect();
        self.live = next as usize;
        keep_new.unwrap_or(next)
    }

    /// Frees room after a failed definition. `Err` if nothing could be
    /// reclaimed.
    fn make_room(&mut self, pointer: u32, allow_lookahead: bool) -> Result<u32> {
        let mut pointer = pointer;
        if self.live < self.allocated() {
            pointer = self.compact(pointer);
        }
        if self.allocated() < self.max {
            return Ok(pointer);
        }
        if allow_lookahead {
            self.lookahead();
            pointer = self.compact(pointer);
            if self.allocated() < self.max {
                return Ok(pointer);
            }
        }
        Err(Error::CosetLimit { limit: self.max })
    }

    fn fill_subgroup(&mut self) -> Result<()> {
        for s in 0..self.subgroup.len() {
            loop {
                let start = self.find(0);
                match self.scan(start, SeqRef::Subgroup(s), 0, true) {
                    Scan::Done => break,
                    Scan::Full => {
                        self.make_room(0, true)?;
                    }
                }
            }
            self.process_deductions();
        }
        Ok(())
    }

    fn hlt_pass(&mut self) -> Result<()> {
        let mut c: u32 = 0;
        while (c as usize) < self.allocated() {
            if !self.is_live(c) {
                c += 1;
                continue;
            }
            let mut r = 0;
            while r < self.relators.len() {
                if !self.is_live(c) {
                    break;
                }
                match self.scan(c, SeqRef::Relator(r), 0, true) {
                    Scan::Done => r += 1,
                    Scan::Full => {
                        c = self.make_room(c, true)?;
                        r = 0;
                    }
                }
            }
            let mut col = 0;
            while col < self.ncols && self.is_live(c) {
                if self.get(c, col) == UNDEF && self.define(c, col).is_none() {
                    c = self.make_room(c, true)?;
                    col = 0;
                    continue;
                }
                col += 1;
            }
            self.process_deductions();
            c += 1;
        }
        Ok(())
    }

    fn felsch_pass(&mut self) -> Result<()> {
        let mut c: u32 = 0;
        let mut col = 0;
        loop {
            self.process_deductions();
            while (c as usize) < self.allocated()
                && (!self.is_live(c) || self.get(c, col) != UNDEF)
            {
                col += 1;
                if col == self.ncols {
                    col = 0;
                    c += 1;
                }
            }
            if c as usize >= self.allocated() {
                return Ok(());
            }
            if self.define(c, col).is_none() {
                c = self.make_room(c, true)?;
                col = 0;
            }
        }
    }

    fn verified(&mut self) -> bool {
        if self.deductions_dropped {
            self.deductions_dropped = false;
            return false;
        }
        let n = self.allocated() as u32;
        for c in 0..n {
            if !self.is_live(c) {
                continue;
            }
            if (0..self.ncols).any(|col| self.get(c, col) == UNDEF) {
                return false;
            }
            for r in 0..self.relators.len() {
                let mut d = c;
                for &x in &self.relators[r] {
                    d = self.get(d, x);
                }
                if d != c {
                    return false;
                }
            }
        }
        self.subgroup.iter().all(|s| {
            let mut d = 0;
            for &x in s {
                d = self.table[d as usize * self.ncols + x];
            }
            d == 0
        })
    }

    fn run(mut self, strategy: Strategy) -> Result<CosetTable> {
        self.fill_subgroup()?;
        match strategy {
            Strategy::Hlt => self.hlt_pass()?,
            Strategy::Felsch => self.felsch_pass()?,
        }
        while !self.verified() {
            self.hlt_pass()?;
        }
        self.compact(0);
        Ok(CosetTable { ngens: self.ncols / 2, entries: self.table })
    }
}

#[derive(Clone, Copy)]
enum SeqRef {
    Relator(usize),
    Subgroup(usize),
}

/// Enumerates the cosets of the subgroup generated by `subgroup_gens`.
///
/// The words generate a subgroup; they are not closed up normally. To
/// factor out a normal closure, add the words as relators instead.
pub fn todd_coxeter(
    pres: &Presentation,
    subgroup_gens: &[Word],
    options: EnumerationOptions,
) -> Result<CosetTable> {
    if options.max_cosets == 0 {
        return Err(Error::InvalidArgument("max_cosets must be at least 1".into()));
    }
    let ngens = pres.num_generators();
    for w in subgroup_gens {
        pres.alphabet().check(w)?;
    }
    if ngens == 0 {
        return Ok(CosetTable { ngens: 0, entries: Vec::new() });
    }
    let relators: Vec<Vec<usize>> = pres
        .relators()
        .iter()
        .map(|r| word_cols(&r.cyclically_reduced()))
        .filter(|r| !r.is_empty())
        .collect();
    let subgroup = subgroup_gens.iter().map(word_cols).filter(|s| !s.is_empty()).collect();
    Enumerator::new(ngens, relators, subgroup, options.max_cosets).run(options.strategy)
}

/// Enumerates the trivial subgroup of `pres` with `extra_relators` added,
/// returning the table of the quotient group.
pub fn quotient_table(
    pres: &Presentation,
    extra_relators: &[Word],
    options: EnumerationOptions,
) -> Result<CosetTable> {
    let quotient = pres.with_relators(extra_relators)?;
    todd_coxeter(&quotient, &[], options)
}

/// Order of `<pres | extra_relators>`, which must be finite for success.
pub fn quotient_order(
    pres: &Presentation,
    extra_relators: &[Word],
    options: EnumerationOptions,
) -> Result<u64> {
    Ok(quotient_table(pres, extra_relators, options)?.len() as u64)
}

/// See [`CosetTable::word_is_identity`].
pub fn word_is_identity_in_quotient(table: &CosetTable, w: &Word) -> Result<bool> {
    table.word_is_identity(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_presentation, parse_word};
    use crate::word::lcs_relators;

    fn opts(n: usize) -> EnumerationOptions {
        EnumerationOptions::with_max_cosets(n)
    }

    fn both(n: usize) -> [EnumerationOptions; 2] {
        [
            EnumerationOptions { max_cosets: n, strategy: Strategy::Hlt },
            EnumerationOptions { max_cosets: n, strategy: Strategy::Felsch },
        ]
    }

    fn assert_permutation_rep(pres: &Presentation, t: &CosetTable) {
        assert!(t.is_closed());
        for r in pres.relators() {
            for c in 0..t.len() {
                assert_eq!(t.trace(c, r), Some(c));
            }
        }
    }

    #[test]
    fn cyclic_group() {
        let pres = parse_presentation("<a | a^3>").unwrap();
        for o in both(100) {
            let t = todd_coxeter(&pres, &[], o).unwrap();
            assert_eq!(t.len(), 3);
            assert_permutation_rep(&pres, &t);
        }
        assert_eq!(quotient_order(&pres, &[], opts(10)).unwrap(), 3);
    }

    #[test]
    fn small_known_groups() {
        let cases = [
            ("<a,b | a^3, b^3, [a,b]>", 9),
            ("<x,y | x^2, y^3, (x*y)^2>", 6),
            ("<a | a^7>", 7),
            ("<a,b | a^2, b^2, (a*b)^5>", 10),
            ("<a,b | a^4, b^2, (a*b)^2>", 8),
            ("<a,b | a^3, b^2, (a*b)^5>", 60),
            ("<a,b | a^2, b^3, (a*b)^4>", 24),
            ("<a,b,c | a^2, b^2, c^2, (a*b)^3, (b*c)^3, (a*c)^2>", 24),
        ];
        for (text, order) in cases {
            let pres = parse_presentation(text).unwrap();
            for o in both(10_000) {
                let t = todd_coxeter(&pres, &[], o).unwrap();
                assert_eq!(t.len(), order, "{text} {:?}", o.strategy);
                assert_permutation_rep(&pres, &t);
            }
        }
    }

    #[test]
    fn subgroup_index() {
        let pres = parse_presentation("<a,b | a^3, b^2, (a*b)^5>").unwrap();
        let a = parse_word("a", pres.alphabet()).unwrap();
        for o in both(1000) {
            assert_eq!(todd_coxeter(&pres, std::slice::from_ref(&a), o).unwrap().len(), 20);
        }
    }

    #[test]
    fn infinite_index_hits_the_limit() {
        let pres = parse_presentation("<a,b | a^3, b^3>").unwrap();
        let a = parse_word("a", pres.alphabet()).unwrap();
        for o in both(100) {
            assert_eq!(todd_coxeter(&pres, std::slice::from_ref(&a), o), Err(Error::CosetLimit { limit: 100 }));
        }
    }

    #[test]
    fn lower_central_quotients_of_c3_free_c3() {
        let pres = parse_presentation("<a,b | a^3, b^3>").unwrap();
        let two = lcs_relators(pres.alphabet(), 2).unwrap();
        let three = lcs_relators(pres.alphabet(), 3).unwrap();
        assert_eq!(quotient_order(&pres, &two, opts(10_000)).unwrap(), 9);
        assert_eq!(quotient_order(&pres, &three, opts(10_000)).unwrap(), 27);
    }

    #[test]
    fn identity_in_quotient() {
        let pres = parse_presentation("<a,b | a^3, b^3, [a,b]>").unwrap();
        let t = todd_coxeter(&pres, &[], opts(100)).unwrap();
        let comm = parse_word("[a,b]", pres.alphabet()).unwrap();
        let a = parse_word("a", pres.alphabet()).unwrap();
        assert!(word_is_identity_in_quotient(&t, &comm).unwrap());
        assert!(word_is_identity_in_quotient(&t, &pres.relators()[0]).unwrap());
        assert!(!word_is_identity_in_quotient(&t, &a).unwrap());

        let partial = CosetTable::from_rows(1, &[vec![Some(0), None]]).unwrap();
        assert_eq!(word_is_identity_in_quotient(&partial, &a), Err(Error::TableNotClosed));
    }

    #[test]
    fn invariant_under_relator_rewrites() {
        let base = parse_presentation("<x,y | x^2, y^3, (x*y)^2>").unwrap();
        let variants = [
            "<x,y | (x*y)^2, y^3, x^2>",
            "<x,y | x^-2, y^3, (x*y)^2>",
            "<x,y | x^2, y*y^3*y^-1, y*(x*y)^2*y^-1>",
            "<x,y | x^2, y^-3, (y^-1*x^-1)^2>",
        ];
        let n = quotient_order(&base, &[], opts(1000)).unwrap();
        for v in variants {
            let p = parse_presentation(v).unwrap();
            assert_eq!(quotient_order(&p, &[], opts(1000)).unwrap(), n, "{v}");
        }
    }

    #[test]
    fn deterministic_tables() {
        let pres = parse_presentation("<a,b | a^3, b^2, (a*b)^5>").unwrap();
        let t1 = todd_coxeter(&pres, &[], opts(10_000)).unwrap();
        let t2 = todd_coxeter(&pres, &[], opts(10_000)).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn cyclic_map_tables() {
        let t = CosetTable::from_cyclic_map(&[0, 1], 3).unwrap();
        assert!(t.is_closed());
        assert_eq!(t.len(), 3);
        assert_eq!(t.act(2, Gen(1), 1), Some(0));
        assert_eq!(t.act(0, Gen(1), -1), Some(2));
        let csv = t.to_csv(&Alphabet::new(["a", "b"]).unwrap());
        assert_eq!(csv.lines().next().unwrap(), "coset,a,a^-1,b,b^-1");
        assert_eq!(csv.lines().nth(1).unwrap(), "1,1,1,2,3");
    }
}
