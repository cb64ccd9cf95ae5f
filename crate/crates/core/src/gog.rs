//! Finite trees of elementary abelian p-groups.
//!
//! A vertex with exponent `m` carries `C_p^m`; an edge with exponent `m`
//! carries `C_p^m`, embedded in each endpoint as the span of its first `m`
//! basis generators.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::freeprod::is_prime;
use crate::presentation::Presentation;
use crate::word::{Alphabet, Gen, Word};

/// Default bound on the number of labelled candidates a search may examine.
pub const DEFAULT_SEARCH_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupTree {
    p: u64,
    vertices: Vec<u32>,
    edges: Vec<TreeEdge>,
}

impl GroupTree {
    /// Checks primality of `p`, the tree shape and that every edge group is
    /// proper in both endpoints.
    pub fn new(p: u64, vertices: Vec<u32>, edges: Vec<TreeEdge>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
        }
        let k = vertices.len();
        if k == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if let Some(i) = vertices.iter().position(|&m| m == 0) {
            return Err(Error::InvalidTree(format!("vertex {i} has trivial group")));
        }
        if edges.len() + 1 != k {
            return Err(Error::InvalidTree(format!("{k} vertices need {} edges, got {}", k - 1, edges.len())));
        }
        let mut dsu: Vec<usize> = (0..k).collect();
        fn find(d: &mut [usize], mut x: usize) -> usize {
            while d[x] != x {
                d[x] = d[d[x]];
                x = d[x];
            }
            x
        }
        for (i, e) in edges.iter().enumerate() {
            if e.u >= k || e.v >= k || e.u == e.v {
                return Err(Error::InvalidTree(format!("edge {i} has bad endpoints")));
            }
            if e.exponent >= vertices[e.u] || e.exponent >= vertices[e.v] {
                return Err(Error::InvalidTree(format!("edge {i} is not a proper subgroup of both endpoints")));
            }
            let (a, b) = (find(&mut dsu, e.u), find(&mut dsu, e.v));
            if a == b {
                return Err(Error::InvalidTree(format!("edge {i} closes a cycle")));
            }
            dsu[a] = b;
        }
        Ok(GroupTree { p, vertices, edges })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        adj
    }

    /// `C_p * ... * C_p` as a path of `n` vertices with trivial edges.
    pub fn free_product(p: u64, n: usize) -> Result<Self> {
        let edges = (1..n).map(|i| TreeEdge { u: i - 1, v: i, exponent: 0 }).collect();
        GroupTree::new(p, vec![1; n], edges)
    }

    /// True when every vertex is `C_p` and every edge trivial.
    pub fn is_free_product_of_cp(&self) -> bool {
        self.vertices.iter().all(|&m| m == 1) && self.edges.iter().all(|e| e.exponent == 0)
    }

    /// Isomorphism-invariant encoding; equal iff the labelled trees are isomorphic.
    pub fn canonical_form(&self) -> String {
        let adj = self.adjacency();
        centers(&adj)
            .into_iter()
            .map(|c| encode(&adj, &self.vertices, &self.edges, c, usize::MAX, None))
            .min()
            .expect("a tree has a center")
    }

    /// Cutting the trivial edges splits the tree into components whose
    /// fundamental groups are the free factors of the whole. The sorted list
    /// of component forms identifies trees that differ only in how those
    /// factors are wired together.
    pub fn free_product_form(&self) -> String {
        let k = self.vertices.len();
        let mut comp: Vec<usize> = (0..k).collect();
        loop {
            let mut changed = false;
            for e in self.edges.iter().filter(|e| e.exponent > 0) {
                let m = comp[e.u].min(comp[e.v]);
                if comp[e.u] != m || comp[e.v] != m {
                    comp[e.u] = m;
                    comp[e.v] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut parts = Vec::new();
        for root in 0..k {
            let members: Vec<usize> = (0..k).filter(|&v| comp[v] == root).collect();
            if members.is_empty() {
                continue;
            }
            let index = |v: usize| members.iter().position(|&w| w == v).expect("member");
            let sub = GroupTree {
                p: self.p,
                vertices: members.iter().map(|&v| self.vertices[v]).collect(),
                edges: self
                    .edges
                    .iter()
                    .filter(|e| e.exponent > 0 && comp[e.u] == root)
                    .map(|e| TreeEdge { u: index(e.u), v: index(e.v), exponent: e.exponent })
                    .collect(),
            };
            parts.push(sub.canonical_form());
        }
        parts.sort();
        parts.join("*")
    }

    // Prefers paths and other low-degree shapes as representatives.
    fn tie_break(&self) -> (usize, String) {
        let max_degree = self.adjacency().iter().map(Vec::len).max().unwrap_or(0);
        (max_degree, self.canonical_form())
    }

    pub fn describe(&self) -> String {
        let vs: Vec<String> = self.vertices.iter().map(|&m| group_name(self.p, m)).collect();
        let es: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{}-{}:{}", e.u, e.v, group_name(self.p, e.exponent)))
            .collect();
        format!("vertices [{}] edges [{}]", vs.join(", "), es.join(", "))
    }
}

fn group_name(p: u64, m: u32) -> String {
    match m {
        0 => "trivial".into(),
        1 => format!("C{p}"),
        m => format!("C{p}^{m}"),
    }
}

fn centers(adj: &[Vec<(usize, usize)>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut leaves: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &v in &leaves {
            for &(w, _) in &adj[v] {
                if deg[w] == 0 {
                    continue;
                }
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
            deg[v] = 0;
        }
        leaves = next;
    }
    leaves
}

fn encode(
    adj: &[Vec<(usize, usize)>],
    vertices: &[u32],
    edges: &[TreeEdge],
    v: usize,
    parent: usize,
    via: Option<u32>,
) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&(w, _)| w != parent)
        .map(|&(w, e)| encode(adj, vertices, edges, w, v, Some(edges[e].exponent)))
        .collect();
    kids.sort();
    let edge = via.map_or(String::new(), |m| format!("{m}:"));
    format!("({edge}{}{})", vertices[v], kids.concat())
}

/// Vertex and edge enumerations with `root` last and each vertex paired with
/// the edge leading towards the root.
pub fn order_tree(t: &GroupTree, root: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if root >= t.num_vertices() {
        return Err(Error::InvalidArgument(format!("root {root} is not a vertex")));
    }
    let adj = t.adjacency();
    let mut seen = vec![false; adj.len()];
    let mut towards_root = vec![usize::MAX; adj.len()];
    let mut bfs = Vec::with_capacity(adj.len());
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        bfs.push(v);
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                towards_root[w] = e;
                queue.push_back(w);
            }
        }
    }
    bfs.reverse();
    let edges = bfs[..bfs.len() - 1].iter().map(|&v| towards_root[v]).collect();
    Ok((bfs, edges))
}

fn p_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `prod |V| / prod |E|`.
pub fn ab_order(t: &GroupTree) -> BigInt {
    let v: u32 = t.vertices.iter().sum();
    let e: u32 = t.edges.iter().map(|e| e.exponent).sum();
    p_pow(t.p, v - e)
}

fn ser_display<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintReport {
    #[serde(serialize_with = "ser_display")]
    pub product_lhs: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub product_rhs: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub euler_lhs: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub euler_rhs: BigRational,
    pub product_ok: bool,
    pub euler_ok: bool,
}

impl ConstraintReport {
    pub fn satisfied(&self) -> bool {
        self.product_ok && self.euler_ok
    }
}

/// Evaluates `(|V1|/|E1|)...(|V_{k-1}|/|E_{k-1}|)|V_k| = p^n` and
/// `sum 1/|E| - sum 1/|V| = n - 1 - n/p`.
pub fn check_constraints(t: &GroupTree, n: u32) -> ConstraintReport {
    let p = BigInt::from(t.p);
    let product_lhs = ab_order(t);
    let product_rhs = p_pow(t.p, n);
    let inv = |m: u32| BigRational::new(BigInt::one(), p_pow(t.p, m));
    let mut euler_lhs = BigRational::zero();
    for e in &t.edges {
        euler_lhs += inv(e.exponent);
    }
    for &m in &t.vertices {
        euler_lhs -= inv(m);
    }
    let n_big = BigInt::from(n);
    let euler_rhs = BigRational::from_integer(n_big.clone() - 1) - BigRational::new(n_big, p);
    ConstraintReport {
        product_ok: product_lhs == product_rhs,
        euler_ok: euler_lhs == euler_rhs,
        product_lhs,
        product_rhs,
        euler_lhs,
        euler_rhs,
    }
}

/// Generators `v{i}x{j}` for vertex `i`; each edge identifies the first
/// `m_e` generators of its endpoints.
pub fn tree_pi1_presentation(t: &GroupTree) -> Result<Presentation> {
    let mut names = Vec::new();
    let mut first = Vec::with_capacity(t.vertices.len());
    for (i, &m) in t.vertices.iter().enumerate() {
        first.push(names.len() as u32);
        for j in 1..=m {
            names.push(format!("v{i}x{j}"));
        }
    }
    let alphabet = Alphabet::new(names)?;
    let g = |v: usize, j: u32| Word::generator(Gen(first[v] + j));
    let mut relators = Vec::new();
    for (i, &m) in t.vertices.iter().enumerate() {
        for j in 0..m {
            relators.push(g(i, j).pow(t.p as i64));
        }
        for j in 0..m {
            for l in j + 1..m {
                relators.push(Word::commutator(&g(i, j), &g(i, l)));
            }
        }
    }
    for e in &t.edges {
        for j in 0..e.exponent {
            relators.push(g(e.u, j).mul(&g(e.v, j).inverse()));
        }
    }
    Presentation::new(alphabet, relators)
}

/// Unlabelled trees on `k` vertices, one representative per isomorphism
/// class, as edge lists.
pub fn tree_shapes(k: usize) -> Vec<Vec<(usize, usize)>> {
    if k == 1 {
        return vec![Vec::new()];
    }
    if k == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut seen = BTreeMap::new();
    let total = k.pow(k as u32 - 2);
    for code in 0..total {
        let mut seq = Vec::with_capacity(k - 2);
        let mut c = code;
        for _ in 0..k - 2 {
            seq.push(c % k);
            c /= k;
        }
        let edges = prufer_decode(&seq, k);
        let t = GroupTree {
            p: 2,
            vertices: vec![1; k],
            edges: edges.iter().map(|&(u, v)| TreeEdge { u, v, exponent: 0 }).collect(),
        };
        seen.entry(t.canonical_form()).or_insert(edges);
    }
    seen.into_values().collect()
}

fn prufer_decode(seq: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &s in seq {
        let leaf = (0..k).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibleTree {
    pub tree: GroupTree,
    /// See [`GroupTree::free_product_form`].
    pub canonical: String,
    pub constraints: ConstraintReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub p: u64,
    pub n: u32,
    pub max_k: usize,
    pub max_exponent: u32,
    /// Labelled candidates checked against the Euler equation.
    pub candidates_examined: usize,
    /// Candidates satisfying the Euler equation on which the divisibility
    /// step was checked.
    pub divisibility_checks: usize,
    pub trees: Vec<AdmissibleTree>,
    /// Every labelled candidate examined; each satisfies the product equation.
    #[serde(skip)]
    pub candidates: Option<Vec<GroupTree>>,
}

impl SearchResult {
    pub fn unique_free_product(&self) -> bool {
        self.trees.len() == 1
            && self.trees[0].tree.is_free_product_of_cp()
            && self.trees[0].tree.num_vertices() == self.n as usize
    }
}

/// With `v_max` the largest vertex order, a tree satisfying the Euler
/// equation and `v_max > p` has a multiple of `p` vertices of order `v_max`.
fn check_divisibility(t: &GroupTree) -> Result<()> {
    let top = *t.vertices.iter().max().expect("nonempty");
    if top <= 1 {
        return Ok(());
    }
    let count = t.vertices.iter().filter(|&&m| m == top).count() as u64;
    if !count.is_multiple_of(t.p) {
        return Err(Error::ClaimViolation(format!(
            "{} satisfies the Euler equation but has {count} vertices of maximal order",
            t.describe()
        )));
    }
    Ok(())
}

struct Shape {
    /// Non-root vertices in BFS order from the root, each with its parent.
    order: Vec<usize>,
    parent: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

fn rooted(edges: &[(usize, usize)], k: usize) -> Shape {
    let mut adj = vec![Vec::new(); k];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut parent = vec![usize::MAX; k];
    let mut order = Vec::with_capacity(k);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if w != 0 && parent[w] == usize::MAX {
                parent[w] = v;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    Shape { order, parent, edges: edges.to_vec() }
}

fn build(p: u64, shape: &Shape, m: &[u32]) -> GroupTree {
    let edges = shape
        .edges
        .iter()
        .map(|&(u, v)| {
            let child = if shape.parent[u] == v { u } else { v };
            let parent = shape.parent[child];
            TreeEdge { u: parent.min(child), v: parent.max(child), exponent: m[shape.parent.len() + child] }
        })
        .collect();
    GroupTree { p, vertices: m[..shape.parent.len()].to_vec(), edges }
}

/// Compositions of `n` into `k` positive parts, lexicographic.
fn compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if (n as usize) < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for first in 1..=n - (k as u32 - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

struct Tally {
    examined: usize,
    divisibility: usize,
    found: Vec<AdmissibleTree>,
    keep: bool,
    candidates: Vec<GroupTree>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchParams {
    pub p: u64,
    pub n: u32,
    pub max_k: usize,
    pub max_exponent: u32,
    pub cap: usize,
    /// Return every examined labelled candidate, not only the admissible ones.
    pub keep_candidates: bool,
}

/// All trees of groups, up to isomorphism, with `k <= max_k` vertices and
/// vertex exponents at most `max_exponent` that satisfy both constraints.
///
/// Rooting at a fixed vertex, the product equation says the parts
/// `m_v - m_e` (with `m_e = 0` at the root) form a composition of `n`; each
/// part is at least one, so only `k <= n` contributes. Every labelling
/// consistent with a composition is checked against the Euler equation.
pub fn enumerate_admissible(p: u64, n: u32, max_k: usize, max_exponent: u32, cap: usize) -> Result<SearchResult> {
    enumerate_admissible_with(&SearchParams { p, n, max_k, max_exponent, cap, keep_candidates: false })
}

pub fn enumerate_admissible_with(params: &SearchParams) -> Result<SearchResult> {
    let SearchParams { p, n, max_k, max_exponent, cap, keep_candidates } = *params;
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
    }
    if n == 0 || max_k == 0 || max_exponent == 0 {
        return Err(Error::InvalidArgument("n, max_k and max_exponent must be positive".into()));
    }
    let per_k: Vec<Result<Tally>> = (1..=max_k.min(n as usize))
        .into_par_iter()
        .map(|k| search_k(params, k))
        .collect();
    let mut examined = 0;
    let mut divisibility = 0;
    let mut trees = Vec::new();
    let mut candidates = Vec::new();
    for t in per_k {
        let t = t?;
        examined += t.examined;
        divisibility += t.divisibility;
        if examined > cap {
            return Err(Error::SearchOverflow { cap });
        }
        trees.extend(t.found);
        candidates.extend(t.candidates);
    }
    trees.sort_by(|a, b| {
        (a.tree.num_vertices(), &a.canonical).cmp(&(b.tree.num_vertices(), &b.canonical))
    });
    Ok(SearchResult {
        p,
        n,
        max_k,
        max_exponent,
        candidates_examined: examined,
        divisibility_checks: divisibility,
        trees,
        candidates: keep_candidates.then_some(candidates),
    })
}

fn search_k(params: &SearchParams, k: usize) -> Result<Tally> {
    let mut tally =
        Tally { examined: 0, divisibility: 0, found: Vec::new(), keep: params.keep_candidates, candidates: Vec::new() };
    let mut seen = BTreeMap::new();
    let parts_all = compositions(params.n, k);
    for edges in tree_shapes(k) {
        let shape = rooted(&edges, k);
        for parts in &parts_all {
            // labels: vertex exponents then edge exponents indexed by child
            let mut m = vec![0u32; 2 * k];
            if parts[0] > params.max_exponent {
                continue;
            }
            m[0] = parts[0];
            assign(params, &shape, parts, 0, &mut m, &mut tally, &mut seen)?;
        }
    }
    tally.found = seen.into_values().collect();
    Ok(tally)
}

fn assign(
    params: &SearchParams,
    shape: &Shape,
    parts: &[u32],
    depth: usize,
    m: &mut Vec<u32>,
    tally: &mut Tally,
    seen: &mut BTreeMap<String, AdmissibleTree>,
) -> Result<()> {
    let SearchParams { p, n, max_exponent, cap, .. } = *params;
    let k = shape.parent.len();
    if depth == shape.order.len() {
        tally.examined += 1;
        if tally.examined > cap {
            return Err(Error::SearchOverflow { cap });
        }
        let tree = build(p, shape, m);
        let constraints = check_constraints(&tree, n);
        if tally.keep {
            tally.candidates.push(tree.clone());
        }
        if constraints.euler_ok {
            tally.divisibility += 1;
            check_divisibility(&tree)?;
            if constraints.product_ok {
                let canonical = tree.free_product_form();
                let candidate = AdmissibleTree { tree, canonical: canonical.clone(), constraints };
                match seen.entry(canonical) {
                    Entry::Vacant(slot) => {
                        slot.insert(candidate);
                    }
                    Entry::Occupied(mut slot) => {
                        if candidate.tree.tie_break() < slot.get().tree.tie_break() {
                            slot.insert(candidate);
                        }
                    }
                }
            }
        }
        return Ok(());
    }
    let v = shape.order[depth];
    let part = parts[depth + 1];
    let mp = m[shape.parent[v]];
    // m_e = m_v - part must stay below both endpoint exponents.
    let hi = max_exponent.min(mp + part - 1);
    for mv in part..=hi {
        m[v] = mv;
        m[k + v] = mv - part;
        assign(params, shape, parts, depth + 1, m, tally, seen)?;
    }
    Ok(())
}

/// Every tree with `k <= max_k` vertices and exponents up to `max_exponent`
/// that satisfies the Euler equation for `n`, without using the product
/// equation. Intended for small bounds.
pub fn euler_candidates(p: u64, n: u32, max_k: usize, max_exponent: u32) -> Result<Vec<GroupTree>> {
    let mut seen = BTreeMap::new();
    for k in 1..=max_k {
        for edges in tree_shapes(k) {
            let mut m = vec![1u32; k];
            loop {
                let caps: Vec<u32> = edges.iter().map(|&(u, v)| m[u].min(m[v])).collect();
                let mut e = vec![0u32; edges.len()];
                loop {
                    let tree = GroupTree::new(
                        p,
                        m.clone(),
                        edges.iter().zip(&e).map(|(&(u, v), &x)| TreeEdge { u, v, exponent: x }).collect(),
                    )?;
                    if check_constraints(&tree, n).euler_ok {
                        seen.entry(tree.canonical_form()).or_insert(tree);
                    }
                    if !odometer_from(&mut e, &caps, 0) {
                        break;
                    }
                }
                if !odometer_from(&mut m, &vec![max_exponent + 1; k], 1) {
                    break;
                }
            }
        }
    }
    Ok(seen.into_values().collect())
}

// Advances `digits` with digit i in [lo, caps[i]); false once it wraps.
fn odometer_from(digits: &mut [u32], caps: &[u32], lo: u32) -> bool {
    for i in 0..digits.len() {
        digits[i] += 1;
        if digits[i] < caps[i] {
            return true;
        }
        digits[i] = lo;
    }
    false
}

/// Runs the divisibility step on a tree satisfying the Euler equation.
pub fn divisibility_holds(t: &GroupTree) -> bool {
    check_divisibility(t).is_ok()
}
