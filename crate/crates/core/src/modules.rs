//! Generator families for submodules of `L^σ(G)`: circuit pairs, Kuratowski
//! and quad 2-cycles, their spans, separation modules, linkage modules and
//! exact decompositions with re-checkable certificates.
//!
//! Spans are assembled in the chart of the ambient lattice `L^σ(G)`: each
//! generator is first certified as a member, then reduced to its
//! coordinates over the canonical basis.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use intlattice::{
    kernel_basis, quotient_invariants, ChartSpan, Int, QuotientInvariants, SparseMatrix, SubLattice,
};
use serde::{Deserialize, Serialize};

use crate::forms::{
    circuit_pair_form, constraint_matrix, is_two_cycle, kuratowski_form, quad_form,
    two_cycle_lattice_with_key, Form2, FormError, FormLattice, PairKey, SigmaMode, Violation,
};
use crate::graph::{Graph, GraphDoc, Separation};
use crate::patterns::{
    disjoint_cycle_pairs, enumerate_all_kuratowski, enumerate_cycles,
    enumerate_disjoint_path_pairs, enumerate_quads, find_linkage, Caps, KuratowskiSubdivision,
    OrientedCycle, Path, Quad, Truncated,
};
use crate::GraphError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModuleError {
    #[error(transparent)]
    Truncated(#[from] Truncated),
    #[error("form is not a 2-cycle: {0}")]
    NotTwoCycle(Violation),
    #[error("form is a 2-cycle but does not lie in L^{0}")]
    WrongMode(SigmaMode),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("pattern rejected: {0}")]
    Pattern(String),
}

/// A kind of generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Pairs,
    Kuratowski,
    Quads,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Pairs, Family::Kuratowski, Family::Quads];

    pub fn name(self) -> &'static str {
        match self {
            Family::Pairs => "pairs",
            Family::Kuratowski => "kuratowski",
            Family::Quads => "quads",
        }
    }

    /// Families that generate `L^σ(G)` for every graph.
    pub fn generating(mode: SigmaMode) -> Vec<Family> {
        match mode {
            SigmaMode::Plain => vec![Family::Pairs, Family::Kuratowski, Family::Quads],
            SigmaMode::Sym => vec![Family::Pairs, Family::Kuratowski],
            SigmaMode::Skew => vec![Family::Pairs, Family::Quads],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pairs" | "pair" | "circuit-pairs" | "circuit-pair" => Ok(Family::Pairs),
            "kuratowski" | "kur" => Ok(Family::Kuratowski),
            "quads" | "quad" => Ok(Family::Quads),
            _ => Err(format!(
                "unknown family {s:?} (expected pairs, kuratowski or quads)"
            )),
        }
    }
}

/// Where a generator comes from. Enough to rebuild and re-certify it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum GeneratorTag {
    CircuitPair {
        c: OrientedCycle,
        d: OrientedCycle,
    },
    Kuratowski {
        h: KuratowskiSubdivision,
        sign: i64,
    },
    Quad {
        quad: Quad,
        s: usize,
        t: usize,
    },
    SigmaImage {
        mode: SigmaMode,
        inner: Box<GeneratorTag>,
    },
}

impl GeneratorTag {
    pub fn family(&self) -> Family {
        match self {
            GeneratorTag::CircuitPair { .. } => Family::Pairs,
            GeneratorTag::Kuratowski { .. } => Family::Kuratowski,
            GeneratorTag::Quad { .. } => Family::Quads,
            GeneratorTag::SigmaImage { inner, .. } => inner.family(),
        }
    }

    fn wrap(self, mode: SigmaMode) -> GeneratorTag {
        match mode {
            SigmaMode::Plain => self,
            _ => GeneratorTag::SigmaImage {
                mode,
                inner: Box::new(self),
            },
        }
    }

    /// Certifies the underlying pattern against `g` and rebuilds the form.
    pub fn build(&self, g: &Graph) -> Result<Form2, ModuleError> {
        match self {
            GeneratorTag::CircuitPair { c, d } => {
                c.certify(g).map_err(ModuleError::Pattern)?;
                d.certify(g).map_err(ModuleError::Pattern)?;
                Ok(circuit_pair_form(g, c, d)?)
            }
            GeneratorTag::Kuratowski { h, sign } => {
                h.certify(g).map_err(ModuleError::Pattern)?;
                if sign.abs() != 1 {
                    return Err(ModuleError::Pattern(format!(
                        "Kuratowski sign {sign} is not ±1"
                    )));
                }
                Ok(kuratowski_form(g, h, *sign))
            }
            GeneratorTag::Quad { quad, s, t } => {
                quad.certify(g).map_err(ModuleError::Pattern)?;
                Ok(quad_form(g, quad, *s, *t)?)
            }
            GeneratorTag::SigmaImage { mode, inner } => Ok(mode.apply(&inner.build(g)?)),
        }
    }

    /// One-line description for reports.
    pub fn describe(&self) -> String {
        match self {
            GeneratorTag::CircuitPair { c, d } => {
                format!("pair C={:?} D={:?}", c.vertices, d.vertices)
            }
            GeneratorTag::Kuratowski { h, sign } => {
                format!(
                    "{}{:?} branch={:?}",
                    if *sign < 0 { "-" } else { "" },
                    h.kind,
                    h.branch
                )
            }
            GeneratorTag::Quad { quad, s, t } => format!(
                "quad axles ({},{}) ({},{}) side ({s},{t}) width {}",
                quad.a,
                quad.b,
                quad.c,
                quad.d,
                quad.width()
            ),
            GeneratorTag::SigmaImage { mode, inner } => format!("{mode}({})", inner.describe()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Generator {
    pub tag: GeneratorTag,
    pub form: Form2,
}

/// A tagged family of forms in `L^σ(G)`.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorSet {
    pub mode: SigmaMode,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn extend(&mut self, other: GeneratorSet) {
        assert_eq!(self.mode, other.mode);
        self.generators.extend(other.generators);
    }

    /// The span inside the chart of `l`.
    pub fn chart_span<'a>(
        &self,
        g: &Graph,
        l: &'a FormLattice,
    ) -> Result<ChartSpan<'a>, ModuleError> {
        let mut span = ChartSpan::new(&l.lattice);
        for gen in &self.generators {
            if span.is_full() {
                break;
            }
            span.add_coords(chart_coords(g, l, &gen.form)?);
        }
        Ok(span)
    }

    /// The span as a canonical sublattice of the pair coordinates.
    pub fn span(&self, g: &Graph, l: &FormLattice) -> Result<SubLattice, ModuleError> {
        Ok(self.chart_span(g, l)?.to_sublattice())
    }
}

/// Checks that `d` lies in `L^σ(G)`.
pub fn check_member(g: &Graph, mode: SigmaMode, d: &Form2) -> Result<(), ModuleError> {
    is_two_cycle(g, d).map_err(ModuleError::NotTwoCycle)?;
    if !mode.complement(d).is_empty() {
        return Err(ModuleError::WrongMode(mode));
    }
    Ok(())
}

/// Chart coordinates of a certified member of `l`.
pub fn chart_coords(g: &Graph, l: &FormLattice, d: &Form2) -> Result<Vec<Int>, ModuleError> {
    check_member(g, l.mode, d)?;
    let v = l.key.sparse(d).expect("2-cycles vanish on adjacent pairs");
    Ok(l.lattice
        .coords_on_pivots(&v)
        .expect("members have integral coordinates"))
}

/// Size of a span compared with its ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub mode: SigmaMode,
    pub families: Vec<Family>,
    pub lattice_rank: usize,
    pub span_rank: usize,
    pub generators: usize,
    /// `L^σ / span`.
    pub quotient: QuotientInvariants,
}

impl SpanReport {
    pub fn is_equal(&self) -> bool {
        self.quotient.is_trivial()
    }
}

/// Lazily computed patterns and lattices of one graph.
pub struct Analysis<'g> {
    g: &'g Graph,
    caps: Caps,
    key: Arc<PairKey>,
    lattices: [OnceCell<FormLattice>; 3],
    cycles: OnceCell<Result<Vec<OrientedCycle>, Truncated>>,
    kuratowski: OnceCell<Result<Vec<KuratowskiSubdivision>, Truncated>>,
    quads: OnceCell<Result<Vec<Quad>, Truncated>>,
}

fn mode_slot(mode: SigmaMode) -> usize {
    match mode {
        SigmaMode::Plain => 0,
        SigmaMode::Sym => 1,
        SigmaMode::Skew => 2,
    }
}

impl<'g> Analysis<'g> {
    pub fn new(g: &'g Graph, caps: Caps) -> Self {
        Analysis {
            g,
            caps,
            key: Arc::new(PairKey::new(g)),
            lattices: Default::default(),
            cycles: OnceCell::new(),
            kuratowski: OnceCell::new(),
            quads: OnceCell::new(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn key(&self) -> &Arc<PairKey> {
        &self.key
    }

    pub fn lattice(&self, mode: SigmaMode) -> &FormLattice {
        self.lattices[mode_slot(mode)]
            .get_or_init(|| two_cycle_lattice_with_key(self.g, self.key.clone(), mode))
    }

    pub fn cycles(&self) -> Result<&[OrientedCycle], Truncated> {
        self.cycles
            .get_or_init(|| enumerate_cycles(self.g, &self.caps))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn kuratowski(&self) -> Result<&[KuratowskiSubdivision], Truncated> {
        self.kuratowski
            .get_or_init(|| enumerate_all_kuratowski(self.g, &self.caps))
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn quads(&self) -> Result<&[Quad], Truncated> {
        self.quads
            .get_or_init(|| enumerate_quads(self.g, &self.caps))
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Every nonzero generator of `family` in mode `mode`.
    pub fn generators(&self, mode: SigmaMode, family: Family) -> Result<GeneratorSet, ModuleError> {
        let g = self.g;
        let mut out = Vec::new();
        match family {
            Family::Pairs => {
                let cycles = self.cycles()?;
                for (i, j) in disjoint_cycle_pairs(g, cycles) {
                    let (c, d) = (&cycles[i], &cycles[j]);
                    let form = mode.apply(&circuit_pair_form(g, c, d)?);
                    if !form.is_empty() {
                        let tag = GeneratorTag::CircuitPair {
                            c: c.clone(),
                            d: d.clone(),
                        }
                        .wrap(mode);
                        out.push(Generator { tag, form });
                    }
                }
            }
            Family::Kuratowski => {
                // d_H is symmetric: it lies in L and L^sym as is, and σ kills it in skew mode.
                if mode != SigmaMode::Skew {
                    for h in self.kuratowski()? {
                        let form = kuratowski_form(g, h, 1);
                        out.push(Generator {
                            tag: GeneratorTag::Kuratowski {
                                h: h.clone(),
                                sign: 1,
                            },
                            form,
                        });
                    }
                }
            }
            Family::Quads => {
                for quad in self.quads()? {
                    for (s, t) in quad.left_sides() {
                        let form = mode.apply(&quad_form(g, quad, s, t)?);
                        if !form.is_empty() {
                            let tag = GeneratorTag::Quad {
                                quad: quad.clone(),
                                s,
                                t,
                            }
                            .wrap(mode);
                            out.push(Generator { tag, form });
                        }
                    }
                }
            }
        }
        Ok(GeneratorSet {
            mode,
            generators: out,
        })
    }

    pub fn generators_of(
        &self,
        mode: SigmaMode,
        families: &[Family],
    ) -> Result<GeneratorSet, ModuleError> {
        let mut set = GeneratorSet {
            mode,
            generators: Vec::new(),
        };
        for &f in families {
            set.extend(self.generators(mode, f)?);
        }
        Ok(set)
    }

    /// Compares the span of `families` with `L^σ(G)`.
    pub fn span_report(
        &self,
        mode: SigmaMode,
        families: &[Family],
    ) -> Result<SpanReport, ModuleError> {
        let l = self.lattice(mode);
        let set = self.generators_of(mode, families)?;
        let span = set.chart_span(self.g, l)?;
        Ok(SpanReport {
            mode,
            families: families.to_vec(),
            lattice_rank: l.rank(),
            span_rank: span.rank(),
            generators: set.len(),
            quotient: span.quotient(),
        })
    }
}

/// `B^σ(G)`: σ-images of all circuit-pair 2-cycles.
pub fn build_b(an: &Analysis, mode: SigmaMode) -> Result<GeneratorSet, ModuleError> {
    an.generators(mode, Family::Pairs)
}

/// `B_{u,v}(G)`: circuit pairs `χ_{C,D}` with `u` on `C` and `v` on `D`.
pub fn build_b_uv(an: &Analysis, u: usize, v: usize) -> Result<GeneratorSet, ModuleError> {
    let mut set = an.generators(SigmaMode::Plain, Family::Pairs)?;
    set.generators.retain(|gen| match &gen.tag {
        GeneratorTag::CircuitPair { c, d } => c.contains_vertex(u) && d.contains_vertex(v),
        _ => false,
    });
    Ok(set)
}

pub fn build_kuratowski_span(an: &Analysis, mode: SigmaMode) -> Result<GeneratorSet, ModuleError> {
    an.generators(mode, Family::Kuratowski)
}

pub fn build_quad_span(an: &Analysis, mode: SigmaMode) -> Result<GeneratorSet, ModuleError> {
    an.generators(mode, Family::Quads)
}

// ---------------------------------------------------------------------------
// separations

/// Whether `d` vanishes on every pair of edges from the same side.
pub fn vanishes_within_sides(d: &Form2, sides: &[u8]) -> bool {
    d.iter().all(|((e, f), _)| sides[e] != sides[f])
}

/// `S^σ(G1, G2)`: members of `L^σ(G)` vanishing on same-side pairs, in the
/// coordinates of `key`.
pub fn build_s_sigma(
    g: &Graph,
    key: &Arc<PairKey>,
    sep: &Separation,
    mode: SigmaMode,
) -> FormLattice {
    let sides = sep.edge_sides(g.m());
    let mut m = constraint_matrix(g, key, mode);
    for (i, &(e, f)) in key.pairs().iter().enumerate() {
        if sides[e] == sides[f] {
            m.push_row([(i, Int::ONE)]);
        }
    }
    FormLattice {
        key: key.clone(),
        mode,
        lattice: kernel_basis(&m),
    }
}

/// `B^σ(G1, G2)`: σ-images of `χ_{C,D}` for disjoint cycles on opposite
/// sides, in both orders.
pub fn build_b_sigma_sep(
    an: &Analysis,
    sep: &Separation,
    mode: SigmaMode,
) -> Result<GeneratorSet, ModuleError> {
    let g = an.graph();
    let sides = sep.edge_sides(g.m());
    let cycles = an.cycles()?;
    let side_of = |c: &OrientedCycle| {
        let s = sides[c.edges[0]];
        c.edges.iter().all(|&e| sides[e] == s).then_some(s)
    };
    let cyc_sides: Vec<Option<u8>> = cycles.iter().map(side_of).collect();
    let mut out = Vec::new();
    for (i, j) in disjoint_cycle_pairs(g, cycles) {
        match (cyc_sides[i], cyc_sides[j]) {
            (Some(a), Some(b)) if a != b => {}
            _ => continue,
        }
        let (c, d) = (&cycles[i], &cycles[j]);
        let form = mode.apply(&circuit_pair_form(g, c, d)?);
        if !form.is_empty() {
            out.push(Generator {
                tag: GeneratorTag::CircuitPair {
                    c: c.clone(),
                    d: d.clone(),
                }
                .wrap(mode),
                form,
            });
        }
    }
    Ok(GeneratorSet {
        mode,
        generators: out,
    })
}

/// σ-images of the plain quad 2-cycles that lie in `S(G1, G2)`.
pub fn build_sep_quads(
    an: &Analysis,
    sep: &Separation,
    mode: SigmaMode,
) -> Result<GeneratorSet, ModuleError> {
    let g = an.graph();
    let sides = sep.edge_sides(g.m());
    let mut out = Vec::new();
    for quad in an.quads()? {
        for (s, t) in quad.left_sides() {
            let q = quad_form(g, quad, s, t)?;
            if !vanishes_within_sides(&q, &sides) {
                continue;
            }
            let form = mode.apply(&q);
            if !form.is_empty() {
                out.push(Generator {
                    tag: GeneratorTag::Quad {
                        quad: quad.clone(),
                        s,
                        t,
                    }
                    .wrap(mode),
                    form,
                });
            }
        }
    }
    Ok(GeneratorSet {
        mode,
        generators: out,
    })
}

/// Outcome of comparing `S^σ` with the span of the separation generators.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub order: usize,
    pub mode: SigmaMode,
    pub s_rank: usize,
    pub b_rank: usize,
    pub span_rank: usize,
    pub b_generators: usize,
    pub quad_generators: usize,
    /// `S^σ / (B^σ + quads)`; quads only enter for order three.
    pub quotient: QuotientInvariants,
}

pub fn separation_report(
    an: &Analysis,
    sep: &Separation,
    mode: SigmaMode,
) -> Result<SeparationReport, ModuleError> {
    let g = an.graph();
    let s = build_s_sigma(g, an.key(), sep, mode);
    let sides = sep.edge_sides(g.m());
    let b = build_b_sigma_sep(an, sep, mode)?;
    let quads = if sep.order() == 3 {
        build_sep_quads(an, sep, mode)?
    } else {
        GeneratorSet {
            mode,
            generators: vec![],
        }
    };
    let mut span = ChartSpan::new(&s.lattice);
    for gen in &b.generators {
        debug_assert!(vanishes_within_sides(&gen.form, &sides));
        span.add_coords(chart_coords(g, &s, &gen.form)?);
    }
    let b_rank = span.rank();
    for gen in &quads.generators {
        if span.is_full() {
            break;
        }
        span.add_coords(chart_coords(g, &s, &gen.form)?);
    }
    Ok(SeparationReport {
        order: sep.order(),
        mode,
        s_rank: s.rank(),
        b_rank,
        span_rank: span.rank(),
        b_generators: b.len(),
        quad_generators: quads.len(),
        quotient: span.quotient(),
    })
}

// ---------------------------------------------------------------------------
// linkages

fn tensor_index(r1: &[usize], r2: &[usize], x: usize, y: usize) -> usize {
    let i = r1.iter().position(|&r| r == x).expect("end in R1");
    let j = r2.iter().position(|&r| r == y).expect("end in R2");
    i * r2.len() + j
}

/// `π(P1 ⊗ P2) = r1⊗s1 − r1⊗s2 − r2⊗s1 + r2⊗s2` for `P1: r1 -> r2` and
/// `P2: s1 -> s2`, as a vector over `Z<R1> ⊗ Z<R2>` (index `i·|R2| + j`).
pub fn pi_of_path_pair(r1: &[usize], r2: &[usize], p1: &Path, p2: &Path) -> Vec<Int> {
    let mut v = vec![Int::ZERO; r1.len() * r2.len()];
    let (a1, b1) = (p1.start(), p1.end());
    let (a2, b2) = (p2.start(), p2.end());
    for (x, y, s) in [(a1, a2, 1), (a1, b2, -1), (b1, a2, -1), (b1, b2, 1)] {
        v[tensor_index(r1, r2, x, y)] += &Int::from(s);
    }
    v
}

/// `P(G; R1, R2)`: the span of `π` over all disjoint path pairs.
pub fn linkage_module(
    g: &Graph,
    r1: &[usize],
    r2: &[usize],
    caps: &Caps,
) -> Result<SubLattice, Truncated> {
    let pairs = enumerate_disjoint_path_pairs(g, r1, r2, caps)?;
    Ok(SubLattice::from_generators(
        r1.len() * r2.len(),
        pairs.iter().map(|(p1, p2)| pi_of_path_pair(r1, r2, p1, p2)),
    ))
}

fn is_two_connected(g: &Graph) -> bool {
    g.n() >= 3 && g.is_connected() && g.enumerate_separations(1).is_empty()
}

/// A sided `(R, S)`-separation, with `G1` given by `side`.
fn is_sided(g: &Graph, sep: &Separation, side: u8, r: &[usize], s: &[usize]) -> bool {
    let other = if side == 1 { 2 } else { 1 };
    if sep.interior(side).is_empty() || sep.interior(other).is_empty() {
        return false;
    }
    let g1 = sep.vertices(side);
    if g1.iter().any(|v| s.contains(v)) {
        return false;
    }
    let mut allowed = vec![false; g.n()];
    for &v in &g1 {
        allowed[v] = true;
    }
    let (s1, s2) = (sep.shared[0], sep.shared[1]);
    let rs: Vec<usize> = sep
        .interior(side)
        .iter()
        .copied()
        .filter(|v| r.contains(v))
        .collect();
    for (i, &u1) in rs.iter().enumerate() {
        for &u2 in &rs[i + 1..] {
            if find_linkage(g, &allowed, u1, s1, u2, s2)
                && find_linkage(g, &allowed, u1, s2, u2, s1)
            {
                return true;
            }
        }
    }
    false
}

/// 2-connected with no sided `(R, S)`- or `(S, R)`-separation.
pub fn is_rs_connected(g: &Graph, r: &[usize], s: &[usize]) -> bool {
    if !is_two_connected(g) {
        return false;
    }
    for sep in g.enumerate_separations(2) {
        for side in [1, 2] {
            if is_sided(g, &sep, side, r, s) || is_sided(g, &sep, side, s, r) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// decomposition and certificates

/// One term `coeff · generator` of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Int,
    pub tag: GeneratorTag,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Outcome {
    Success {
        terms: Vec<Term>,
    },
    Failure {
        /// `(span + <d>) / span`: `Z` when no multiple of `d` is reached.
        order: QuotientInvariants,
        /// `L^σ / span`.
        lattice_quotient: QuotientInvariants,
        span_rank: usize,
        lattice_rank: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub mode: SigmaMode,
    pub families: Vec<Family>,
    pub target: Form2,
    pub generators: usize,
    pub outcome: Outcome,
}

impl DecompositionReport {
    pub fn succeeded(&self) -> bool {
        matches!(self.outcome, Outcome::Success { .. })
    }

    pub fn certificate(&self, g: &Graph) -> Certificate {
        match &self.outcome {
            Outcome::Success { terms } => Certificate::Decomposition {
                graph: g.to_doc(),
                mode: self.mode,
                target: self.target.clone(),
                terms: terms.clone(),
            },
            Outcome::Failure { order, .. } => Certificate::NonMembership {
                graph: g.to_doc(),
                mode: self.mode,
                families: self.families.clone(),
                target: self.target.clone(),
                order: order.clone(),
            },
        }
    }
}

/// Writes `d ∈ L^σ(G)` over the generators of `families`, or explains why
/// it cannot be written.
pub fn decompose(
    an: &Analysis,
    d: &Form2,
    families: &[Family],
    mode: SigmaMode,
) -> Result<DecompositionReport, ModuleError> {
    let g = an.graph();
    let l = an.lattice(mode);
    let target = chart_coords(g, l, d)?;
    let set = an.generators_of(mode, families)?;
    let mut span = ChartSpan::traced(&l.lattice);
    for (i, gen) in set.generators.iter().enumerate() {
        if span.is_full() {
            break;
        }
        span.add_coords_traced(chart_coords(g, l, &gen.form)?, i);
    }
    let outcome = match span.trace_of(&target) {
        Some(combo) => {
            let mut sum = Form2::new();
            let mut terms = Vec::new();
            for (i, c) in combo {
                if c.is_zero() {
                    continue;
                }
                sum.add_scaled(&set.generators[i].form, &c);
                terms.push(Term {
                    coeff: c,
                    tag: set.generators[i].tag.clone(),
                });
            }
            assert_eq!(&sum, d, "decomposition does not reproduce the target");
            Outcome::Success { terms }
        }
        None => {
            let r = l.rank();
            let rows = span.rows().to_vec();
            let before = SubLattice::from_generators(r, rows.clone());
            let after = SubLattice::from_generators(r, rows.into_iter().chain([target]));
            Outcome::Failure {
                order: quotient_invariants(&before, &after).expect("span lies in its extension"),
                lattice_quotient: span.quotient(),
                span_rank: span.rank(),
                lattice_rank: r,
            }
        }
    };
    Ok(DecompositionReport {
        mode,
        families: families.to_vec(),
        target: d.clone(),
        generators: set.len(),
        outcome,
    })
}

/// A self-contained claim about a form that can be re-checked from scratch.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Decomposition {
        graph: GraphDoc,
        mode: SigmaMode,
        target: Form2,
        terms: Vec<Term>,
    },
    NonMembership {
        graph: GraphDoc,
        mode: SigmaMode,
        families: Vec<Family>,
        target: Form2,
        order: QuotientInvariants,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub accepted: bool,
    pub reason: String,
}

impl CertificateCheck {
    fn reject(reason: impl Into<String>) -> Self {
        CertificateCheck {
            accepted: false,
            reason: reason.into(),
        }
    }
}

/// Re-checks a certificate: decompositions by rebuilding every pattern and
/// summing exactly, non-membership claims by recomputation.
pub fn check_certificate(cert: &Certificate, caps: &Caps) -> Result<CertificateCheck, ModuleError> {
    match cert {
        Certificate::Decomposition {
            graph,
            mode,
            target,
            terms,
        } => {
            let g = Graph::from_doc(graph)?;
            if let Err(e) = check_member(&g, *mode, target) {
                return Ok(CertificateCheck::reject(format!("target: {e}")));
            }
            let mut sum = Form2::new();
            for (i, term) in terms.iter().enumerate() {
                let form = match term.tag.build(&g) {
                    Ok(f) => f,
                    Err(e) => return Ok(CertificateCheck::reject(format!("term {i}: {e}"))),
                };
                if let Err(e) = check_member(&g, *mode, &form) {
                    return Ok(CertificateCheck::reject(format!("term {i}: {e}")));
                }
                sum.add_scaled(&form, &term.coeff);
            }
            if &sum != target {
                let diff = sum.minus(target);
                let ((e, f), x) = diff.iter().next().expect("sums differ somewhere");
                return Ok(CertificateCheck::reject(format!(
                    "sum differs from the target at ({e}, {f}) by {x}"
                )));
            }
            Ok(CertificateCheck {
                accepted: true,
                reason: format!("{} terms sum to the target", terms.len()),
            })
        }
        Certificate::NonMembership {
            graph,
            mode,
            families,
            target,
            order,
        } => {
            let g = Graph::from_doc(graph)?;
            if let Err(e) = check_member(&g, *mode, target) {
                return Ok(CertificateCheck::reject(format!("target: {e}")));
            }
            let an = Analysis::new(&g, *caps);
            let report = decompose(&an, target, families, *mode)?;
            match report.outcome {
                Outcome::Success { terms } => Ok(CertificateCheck::reject(format!(
                    "target decomposes with {} terms",
                    terms.len()
                ))),
                Outcome::Failure { order: o, .. } if &o == order => Ok(CertificateCheck {
                    accepted: true,
                    reason: format!("target has order {o} modulo the span"),
                }),
                Outcome::Failure { order: o, .. } => Ok(CertificateCheck::reject(format!(
                    "recomputed order {o} differs from claimed {order}"
                ))),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// restriction projections

/// Coordinates of `P_{u,v}`: pairs `(e, f)` with `e` at `u`, `f` at `v`,
/// nonadjacent.
#[derive(Clone, Debug)]
pub struct PuvCoords {
    pub u: usize,
    pub v: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl PuvCoords {
    pub fn new(g: &Graph, u: usize, v: usize) -> Self {
        let mut pairs = Vec::new();
        for &e in g.edges_at(u) {
            for &f in g.edges_at(v) {
                if !g.adjacent(e, f) {
                    pairs.push((e, f));
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        PuvCoords { u, v, pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn project(&self, d: &Form2) -> Vec<Int> {
        self.pairs.iter().map(|&(e, f)| d.get(e, f)).collect()
    }
}

/// Integer relations `Σ c_i cols_i = 0` among equal-length vectors.
pub fn integer_relations(cols: &[Vec<Int>], len: usize) -> SubLattice {
    let mut m = SparseMatrix::new(cols.len());
    for r in 0..len {
        m.push_row(
            cols.iter()
                .enumerate()
                .filter(|(_, c)| !c[r].is_zero())
                .map(|(j, c)| (j, c[r].clone())),
        );
    }
    kernel_basis(&m)
}

/// Templates `P_{u,v}(d_H)` for Kuratowski subdivisions in which `u` and
/// `v` are branch vertices joined by a single-edge arc. Each template is
/// normalized to a positive first entry; duplicates are dropped.
pub fn kuratowski_templates(
    an: &Analysis,
    u: usize,
    v: usize,
) -> Result<Vec<Vec<Int>>, ModuleError> {
    let g = an.graph();
    let coords = PuvCoords::new(g, u, v);
    let mut out: Vec<Vec<Int>> = Vec::new();
    for h in an.kuratowski()? {
        let (Some(x), Some(y)) = (
            h.branch.iter().position(|&b| b == u),
            h.branch.iter().position(|&b| b == v),
        ) else {
            continue;
        };
        let model = h.model_edges();
        let Some(k) = model
            .iter()
            .position(|&(p, q)| (p, q) == (x, y) || (p, q) == (y, x))
        else {
            continue;
        };
        if h.arcs[k].len() != 1 {
            continue;
        }
        let mut t = coords.project(&kuratowski_form(g, h, 1));
        if let Some(first) = t.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                t.iter_mut().for_each(|x| *x = -&*x);
            }
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// Canonical residues of forms modulo `B(G)` inside `L(G)`.
pub struct ResidueMap<'a> {
    g: &'a Graph,
    lattice: &'a FormLattice,
    b: ChartSpan<'a>,
}

impl<'a> ResidueMap<'a> {
    pub fn new(an: &'a Analysis) -> Result<Self, ModuleError> {
        let l = an.lattice(SigmaMode::Plain);
        let b = build_b(an, SigmaMode::Plain)?.chart_span(an.graph(), l)?;
        Ok(ResidueMap {
            g: an.graph(),
            lattice: l,
            b,
        })
    }

    pub fn residue(&self, d: &Form2) -> Result<Vec<Int>, ModuleError> {
        Ok(self.b.residue(&chart_coords(self.g, self.lattice, d)?))
    }

    pub fn in_b(&self, d: &Form2) -> Result<bool, ModuleError> {
        Ok(self.residue(d)?.iter().all(Int::is_zero))
    }

    /// `L / B`.
    pub fn quotient(&self) -> QuotientInvariants {
        self.b.quotient()
    }

    pub fn b_span(&self) -> &ChartSpan<'a> {
        &self.b
    }
}

/// Coefficient totals per family, for summaries.
pub fn family_counts(terms: &[Term]) -> BTreeMap<Family, usize> {
    let mut m = BTreeMap::new();
    for t in terms {
        *m.entry(t.tag.family()).or_insert(0) += 1;
    }
    m
}
