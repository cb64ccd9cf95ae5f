//! Lower central quotient comparisons, the kernel certificate for the
//! Type II example and the two-parameter families built on
//! `C_{p^l} * C_{p^k}`.
//!
//! Isomorphism of finite quotients `Γ/γ_i ≅ G/γ_i` is certified by equal
//! orders plus an explicit epimorphism `Γ/γ_i → G/γ_i`: the images of Γ's
//! generators must kill Γ's relators in `G/γ_i` and generate the
//! abelianization of `G` (a nilpotent group is generated by any lift of
//! generators of its abelianization).

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::coset::{quotient_table, EnumerationOptions};
use crate::error::{Error, Result};
use crate::freeprod::is_prime;
use crate::intmat::{abelian_invariants, determinant};
use crate::presentation::Presentation;
use crate::rewriting::{relation_matrix, rs_presentation_with_order, simplify_keeping};
use crate::word::{lcs_relators, Alphabet, Gen, Word};
use crate::{IntMatrix, SmithForm};

/// Steps of the Type II argument that are taken from the proof rather than
/// computed.
pub const NON_RESIDUAL_NILPOTENCE_REASONING: [&str; 3] = [
    "if a^q = 1 in G (q = p^l) then a lies in the normal closure of a[a^q,b] and b^q, so a = 1 in H",
    "hence a^q != 1 in G, so the epimorphism G -> C_q * C_q' sending a, b to the factor generators has nontrivial kernel",
    "a weakly para group whose comparison map to the reference group is not injective is not residually nilpotent",
];

/// The reference group and its two companions for fixed `p, l, k`.
#[derive(Clone, Debug)]
pub struct ParaFamily {
    pub p: u64,
    pub l: u32,
    pub k: u32,
    pub gamma: Presentation,
    pub g1: Presentation,
    pub g2: Presentation,
    pub h: Presentation,
    /// Images of `a, b` under `a -> a[b,a]`, `b -> b`.
    pub phi1: Vec<Word>,
    /// Images of `a, b` under `a -> a[a^{p^l},b]`, `b -> b`.
    pub phi2: Vec<Word>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Member {
    G1,
    G2,
}

impl std::str::FromStr for Member {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "G1" => Ok(Member::G1),
            "G2" => Ok(Member::G2),
            _ => Err(Error::InvalidArgument(format!("unknown family member `{s}` (expected G1 or G2)"))),
        }
    }
}

fn checked_pow(p: u64, e: u32) -> Result<i64> {
    p.checked_pow(e)
        .and_then(|m| i64::try_from(m).ok())
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{e} overflows")))
}

impl ParaFamily {
    pub fn new(p: u64, l: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
        }
        if l == 0 || k == 0 {
            return Err(Error::InvalidArgument("l and k must be at least 1".into()));
        }
        let (ql, qk) = (checked_pow(p, l)?, checked_pow(p, k)?);
        let al = Alphabet::new(["a", "b"])?;
        let a = Word::generator(Gen(0));
        let b = Word::generator(Gen(1));
        let x1 = a.mul(&Word::commutator(&b, &a));
        let x2 = a.mul(&Word::commutator(&a.pow(ql), &b));
        let pres = |rels: Vec<Word>| Presentation::new(al.clone(), rels);
        Ok(ParaFamily {
            p,
            l,
            k,
            gamma: pres(vec![a.pow(ql), b.pow(qk)])?,
            g1: pres(vec![x1.pow(ql), b.pow(qk)])?,
            g2: pres(vec![x2.pow(ql), b.pow(qk)])?,
            h: pres(vec![x2.clone(), b.pow(ql)])?,
            phi1: vec![x1, b.clone()],
            phi2: vec![x2, b],
        })
    }

    pub fn member(&self, m: Member) -> (&Presentation, &[Word]) {
        match m {
            Member::G1 => (&self.g1, &self.phi1),
            Member::G2 => (&self.g2, &self.phi2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassComparison {
    pub class: usize,
    pub order_reference: Option<u64>,
    pub order_target: Option<u64>,
    /// The images kill the reference relators in the target quotient.
    pub homomorphism_ok: Option<bool>,
    pub epi_ok: Option<bool>,
    pub verdict: Verdict,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcsReport {
    pub reference: String,
    pub target: String,
    pub images: Vec<String>,
    /// The images generate the abelianization of the target.
    pub generates_abelianization: bool,
    pub classes: Vec<ClassComparison>,
}

impl LcsReport {
    pub fn all_match(&self) -> bool {
        self.classes.iter().all(|c| c.verdict == Verdict::Match)
    }

    pub fn any_mismatch(&self) -> bool {
        self.classes.iter().any(|c| c.verdict == Verdict::Mismatch)
    }

    pub fn overall(&self) -> Verdict {
        if self.any_mismatch() {
            Verdict::Mismatch
        } else if self.all_match() {
            Verdict::Match
        } else {
            Verdict::Inconclusive
        }
    }

    /// Largest `c` such that every class `2..=c` matches.
    pub fn verified_through(&self) -> Option<usize> {
        self.classes.iter().take_while(|c| c.verdict == Verdict::Match).last().map(|c| c.class)
    }
}

fn compare_class(
    reference: &Presentation,
    target: &Presentation,
    images: &[Word],
    generates: bool,
    class: usize,
    options: EnumerationOptions,
) -> Result<ClassComparison> {
    let mut out = ClassComparison {
        class,
        order_reference: None,
        order_target: None,
        homomorphism_ok: None,
        epi_ok: None,
        verdict: Verdict::Inconclusive,
        note: None,
    };
    let rel_ref = lcs_relators(reference.alphabet(), class)?;
    let rel_tgt = lcs_relators(target.alphabet(), class)?;
    match quotient_table(reference, &rel_ref, options) {
        Ok(t) => out.order_reference = Some(t.len() as u64),
        Err(e) if e.is_inconclusive() => out.note = Some(format!("reference: {e}")),
        Err(e) => return Err(e),
    }
    let table = match quotient_table(target, &rel_tgt, options) {
        Ok(t) => t,
        Err(e) if e.is_inconclusive() => {
            out.note = Some(format!("target: {e}"));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.order_target = Some(table.len() as u64);
    let mut hom = true;
    for r in reference.relators() {
        hom &= table.word_is_identity(&r.substitute(images)?)?;
    }
    out.homomorphism_ok = Some(hom);
    out.epi_ok = Some(hom && generates);
    out.verdict = match out.order_reference {
        None => Verdict::Inconclusive,
        Some(n) if n == table.len() as u64 && hom && generates => Verdict::Match,
        Some(_) => Verdict::Mismatch,
    };
    Ok(out)
}

/// Compares `reference/γ_i` with `target/γ_i` for `i = 2..=max_class` along
/// the map sending the `j`-th generator of `reference` to `images[j]`.
pub fn compare_lcs(
    reference: &Presentation,
    target: &Presentation,
    images: &[Word],
    max_class: usize,
    options: EnumerationOptions,
) -> Result<LcsReport> {
    if max_class < 2 {
        return Err(Error::InvalidClass(max_class));
    }
    if images.len() != reference.num_generators() {
        return Err(Error::InvalidArgument(format!(
            "{} images for {} generators",
            images.len(),
            reference.num_generators()
        )));
    }
    for w in images {
        target.alphabet().check(w)?;
    }
    let generates = abelian_invariants(&target.with_relators(images)?).is_trivial();
    let classes = (2..=max_class)
        .into_par_iter()
        .map(|c| compare_class(reference, target, images, generates, c, options))
        .collect::<Result<Vec<_>>>()?;
    for pair in classes.windows(2) {
        if pair[1].epi_ok == Some(true) && pair[0].epi_ok == Some(false) {
            return Err(Error::ClaimViolation(format!(
                "epimorphism certificate holds at class {} but fails at class {}",
                pair[1].class, pair[0].class
            )));
        }
    }
    Ok(LcsReport {
        reference: reference.to_string(),
        target: target.to_string(),
        images: images.iter().map(|w| w.display(target.alphabet()).to_string()).collect(),
        generates_abelianization: generates,
        classes,
    })
}

pub fn verify_weakly_para(
    fam: &ParaFamily,
    which: Member,
    max_class: usize,
    options: EnumerationOptions,
) -> Result<LcsReport> {
    let (g, images) = fam.member(which);
    compare_lcs(&fam.gamma, g, images, max_class, options)
}

/// Reidemeister–Schreier data for the normal closure of the first generator
/// of `h`, with the transversal built from the remaining generators first.
#[derive(Clone, Debug, Serialize)]
pub struct KernelCertificate {
    pub index: usize,
    pub presentation: String,
    pub generator_names: Vec<String>,
    /// Schreier words in the parent alphabet.
    pub schreier_words: Vec<String>,
    pub all_conjugates_of_first: bool,
    /// Every relator is `x^(±e1) y^(∓e2)` on distinct generators with
    /// `{e1, e2} = {q, q - 1}`, where `q` is the index.
    pub relators_two_term: bool,
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: IntMatrix,
    #[serde(serialize_with = "ser_opt_big")]
    pub determinant: Option<BigInt>,
    #[serde(serialize_with = "ser_smith")]
    pub abelianization: SmithForm,
    /// The kernel has nontrivial abelianization, so it is nontrivial.
    pub nontrivial: bool,
}

fn ser_matrix<S: serde::Serializer>(m: &IntMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
}

fn ser_opt_big<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    x.as_ref().map(|v| v.to_string()).serialize(s)
}

fn ser_smith<S: serde::Serializer>(x: &SmithForm, s: S) -> std::result::Result<S::Ok, S::Error> {
    x.invariant_factors.iter().map(|v| v.to_string()).collect::<Vec<_>>().serialize(s)
}

fn is_conjugate_of(w: &Word, g: Gen) -> bool {
    w.cyclically_reduced() == Word::generator(g)
}

fn two_term(r: &Word, q: i64) -> bool {
    match r.syllables() {
        [(x, e), (y, f)] => x != y && e.signum() == -f.signum() && {
            let (e, f) = (e.abs(), f.abs());
            (e == q && f == q - 1) || (e == q - 1 && f == q)
        },
        _ => false,
    }
}

pub fn kernel_certificate(h: &Presentation, options: EnumerationOptions) -> Result<KernelCertificate> {
    if h.num_generators() == 0 {
        return Err(Error::InvalidArgument("presentation has no generators".into()));
    }
    let first = Gen(0);
    let table = quotient_table(h, &[Word::generator(first)], options)?;
    let order: Vec<Gen> = h.alphabet().gens().skip(1).chain([first]).collect();
    // Conjugates of the first generator are kept so the matrix stays square
    // even when an exponent q - 1 equals one.
    let data = simplify_keeping(&rs_presentation_with_order(h, &table, &order)?, |s| {
        is_conjugate_of(&s.word, first)
    })?;
    let pres = &data.presentation;
    let matrix = relation_matrix(pres);
    let determinant = (matrix.rows() == matrix.cols() && matrix.rows() > 0)
        .then(|| determinant(&matrix))
        .transpose()?;
    let abelianization = abelian_invariants(pres);
    let q = table.len() as i64;
    Ok(KernelCertificate {
        index: table.len(),
        presentation: pres.to_string(),
        generator_names: pres.alphabet().names().to_vec(),
        schreier_words: data.generators.iter().map(|s| s.word.display(h.alphabet()).to_string()).collect(),
        all_conjugates_of_first: data.generators.iter().all(|s| is_conjugate_of(&s.word, first)),
        relators_two_term: !pres.relators().is_empty() && pres.relators().iter().all(|r| two_term(r, q)),
        nontrivial: !abelianization.is_trivial(),
        matrix,
        determinant,
        abelianization,
    })
}

/// Relation matrix of the simplified kernel of `H -> C_p`, `a -> 0`, `b -> 1`.
pub fn matrix_a(p: u64) -> Result<IntMatrix> {
    Ok(kernel_certificate(&ParaFamily::new(p, 1, 1)?.h, EnumerationOptions::default())?.matrix)
}

/// `p^p - (p-1)^p`.
pub fn expected_det(p: u64) -> BigInt {
    let p_big = BigInt::from(p);
    num_traits::pow(p_big.clone(), p as usize) - num_traits::pow(p_big - 1, p as usize)
}

/// True when `a` and `b` have the same rows up to order and sign.
pub fn rows_equal_up_to_sign_and_order(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    let canon = |m: &IntMatrix| {
        let mut rows: Vec<Vec<BigInt>> = m
            .to_rows()
            .into_iter()
            .map(|r| {
                let neg: Vec<BigInt> = r.iter().map(|x| -x).collect();
                r.clone().max(neg)
            })
            .collect();
        rows.sort();
        rows
    };
    canon(a) == canon(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainVerdict {
    /// Weakly para through the tested classes and the kernel is nontrivial.
    Certified,
    Broken,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub weakly_para: LcsReport,
    pub kernel: Option<KernelCertificate>,
    pub verdict: ChainVerdict,
    pub paper_supplied_reasoning: Vec<&'static str>,
}

/// Combines a lower central comparison with the kernel certificate of `h`.
pub fn not_residually_nilpotent_chain(
    weakly_para: LcsReport,
    h: &Presentation,
    options: EnumerationOptions,
) -> Result<ChainReport> {
    let kernel = match kernel_certificate(h, options) {
        Ok(k) => Some(k),
        Err(e) if e.is_inconclusive() => None,
        Err(e) => return Err(e),
    };
    let verdict = match (weakly_para.overall(), &kernel) {
        (Verdict::Mismatch, _) => ChainVerdict::Broken,
        (_, Some(k)) if !k.nontrivial => ChainVerdict::Broken,
        (Verdict::Match, Some(_)) => ChainVerdict::Certified,
        _ => ChainVerdict::Inconclusive,
    };
    Ok(ChainReport {
        weakly_para,
        kernel,
        verdict,
        paper_supplied_reasoning: NON_RESIDUAL_NILPOTENCE_REASONING.to_vec(),
    })
}

pub fn verify_not_residually_nilpotent(
    fam: &ParaFamily,
    max_class: usize,
    options: EnumerationOptions,
) -> Result<ChainReport> {
    let report = verify_weakly_para(fam, Member::G2, max_class, options)?;
    not_residually_nilpotent_chain(report, &fam.h, options)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TypeLabel {
    #[serde(rename = "Type I")]
    TypeI,
    #[serde(rename = "Type II")]
    TypeII,
    #[serde(rename = "Type III")]
    TypeIII,
    #[serde(rename = "unknown")]
    Unknown,
}

impl std::fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TypeLabel::TypeI => "Type I",
            TypeLabel::TypeII => "Type II",
            TypeLabel::TypeIII => "Type III",
            TypeLabel::Unknown => "unknown",
        })
    }
}

/// Labels the two known families. `G2` is Type II once its chain is
/// certified; the residually nilpotent quotient of `G1` is Type III. The
/// labels are bookkeeping and do not decide the trichotomy in general.
pub fn type_label(fam: &ParaFamily, target: &Presentation, report: &LcsReport, chain: Option<&ChainReport>) -> TypeLabel {
    if report.overall() != Verdict::Match {
        return TypeLabel::Unknown;
    }
    if *target == fam.g2 && chain.is_some_and(|c| c.verdict == ChainVerdict::Certified) {
        TypeLabel::TypeII
    } else if *target == fam.g1 {
        TypeLabel::TypeIII
    } else if *target == fam.gamma {
        TypeLabel::TypeI
    } else {
        TypeLabel::Unknown
    }
}

/// `|det|` written as `p^p - (p-1)^p` when it has that value.
pub fn factored_det(p: u64, det: &BigInt) -> String {
    let abs = det.abs();
    if abs == expected_det(p) {
        format!("{abs} = {p}^{p} - {}^{p}", p - 1)
    } else if abs.is_one() {
        "1".into()
    } else {
        abs.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;

    fn opts() -> EnumerationOptions {
        EnumerationOptions::default()
    }

    #[test]
    fn family_presentations_at_l_k_one() {
        let f = ParaFamily::new(3, 1, 1).unwrap();
        assert_eq!(f.gamma, parse_presentation("<a,b | a^3, b^3>").unwrap());
        assert_eq!(f.g1, parse_presentation("<a,b | (a*[b,a])^3, b^3>").unwrap());
        assert_eq!(f.g2, parse_presentation("<a,b | (a*[a^3,b])^3, b^3>").unwrap());
        assert_eq!(f.h, parse_presentation("<a,b | a*[a^3,b], b^3>").unwrap());
        assert!(ParaFamily::new(4, 1, 1).is_err());
    }

    #[test]
    fn matrix_a_for_three() {
        let a = matrix_a(3).unwrap();
        let shown = IntMatrix::from_rows(
            [[-3, 2, 0], [0, -3, 2], [-2, 0, 3]].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
        .unwrap();
        assert!(rows_equal_up_to_sign_and_order(&a, &shown), "{a:?}");
        assert_eq!(determinant(&a).unwrap().abs(), BigInt::from(19));
        assert_eq!(factored_det(3, &BigInt::from(-19)), "19 = 3^3 - 2^3");
    }

    #[test]
    fn determinants_follow_the_formula() {
        for (p, d) in [(2u64, 3), (3, 19), (5, 2101), (7, 543607)] {
            let m = matrix_a(p).unwrap();
            assert_eq!(m.rows(), p as usize);
            assert_eq!(m.cols(), p as usize);
            assert_eq!(determinant(&m).unwrap().abs(), BigInt::from(d));
            assert_eq!(expected_det(p), BigInt::from(d));
        }
    }

    #[test]
    fn kernel_shape() {
        for p in [3u64, 5, 7] {
            let k = kernel_certificate(&ParaFamily::new(p, 1, 1).unwrap().h, opts()).unwrap();
            assert_eq!(k.index, p as usize);
            assert_eq!(k.generator_names.len(), p as usize);
            assert!(k.all_conjugates_of_first);
            assert!(k.relators_two_term, "{}", k.presentation);
            assert!(k.nontrivial);
        }
    }

    #[test]
    fn reference_against_itself() {
        let f = ParaFamily::new(3, 1, 1).unwrap();
        let id = vec![Word::generator(Gen(0)), Word::generator(Gen(1))];
        let r = compare_lcs(&f.gamma, &f.gamma, &id, 3, opts()).unwrap();
        assert!(r.all_match());
        assert_eq!(r.verified_through(), Some(3));
        let orders: Vec<u64> = r.classes.iter().map(|c| c.order_reference.unwrap()).collect();
        assert_eq!(orders, vec![9, 27]);
    }

    #[test]
    fn abelian_control_mismatches_at_class_three() {
        let f = ParaFamily::new(3, 1, 1).unwrap();
        let ab = parse_presentation("<a,b | a^3, b^3, [a,b]>").unwrap();
        let id = vec![Word::generator(Gen(0)), Word::generator(Gen(1))];
        let r = compare_lcs(&f.gamma, &ab, &id, 3, opts()).unwrap();
        assert_eq!(r.classes[0].verdict, Verdict::Match);
        assert_eq!(r.classes[1].verdict, Verdict::Mismatch);
        assert_eq!((r.classes[1].order_target, r.classes[1].order_reference), (Some(9), Some(27)));
        assert_eq!(r.overall(), Verdict::Mismatch);
    }

    #[test]
    fn non_generating_images_are_not_epimorphisms() {
        let f = ParaFamily::new(3, 1, 1).unwrap();
        let images = vec![Word::generator(Gen(0)), Word::generator(Gen(0))];
        let r = compare_lcs(&f.gamma, &f.gamma, &images, 2, opts()).unwrap();
        assert!(!r.generates_abelianization);
        assert_eq!(r.classes[0].verdict, Verdict::Mismatch);
    }

    #[test]
    fn families_match_through_class_three() {
        let f = ParaFamily::new(3, 1, 1).unwrap();
        for m in [Member::G1, Member::G2] {
            let r = verify_weakly_para(&f, m, 3, opts()).unwrap();
            assert!(r.all_match(), "{m:?}: {r:?}");
        }
    }

    #[test]
    fn coset_limit_is_inconclusive() {
        let f = ParaFamily::new(3, 1, 1).unwrap();
        let r = verify_weakly_para(&f, Member::G1, 3, EnumerationOptions::with_max_cosets(10)).unwrap();
        assert_eq!(r.classes[1].verdict, Verdict::Inconclusive);
        assert_eq!(r.overall(), Verdict::Inconclusive);
    }

    #[test]
    fn chain_and_labels() {
        let f = ParaFamily::new(3, 1, 1).unwrap();
        let chain = verify_not_residually_nilpotent(&f, 3, opts()).unwrap();
        assert_eq!(chain.verdict, ChainVerdict::Certified);
        assert_eq!(chain.kernel.as_ref().unwrap().determinant.as_ref().unwrap().abs(), BigInt::from(19));
        assert_eq!(type_label(&f, &f.g2, &chain.weakly_para, Some(&chain)), TypeLabel::TypeII);
        let r1 = verify_weakly_para(&f, Member::G1, 3, opts()).unwrap();
        assert_eq!(type_label(&f, &f.g1, &r1, None), TypeLabel::TypeIII);
        let other = parse_presentation("<a,b | a^3, b^3, [a,b]>").unwrap();
        assert_eq!(type_label(&f, &other, &r1, None), TypeLabel::Unknown);

        let control = parse_presentation("<a,b | a*[a,b], b>").unwrap();
        let broken = not_residually_nilpotent_chain(chain.weakly_para.clone(), &control, opts()).unwrap();
        assert_eq!(broken.verdict, ChainVerdict::Broken);
        assert!(!broken.kernel.unwrap().nontrivial);
    }
}
