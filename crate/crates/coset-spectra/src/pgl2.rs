//! The group G = PGL2(F_q): canonical elements, the subgroups U (unipotent),
//! A (split torus), K (nonsplit torus), right-coset spaces G/H, and the
//! parametric double cosets K_c, U_t, A_c that generate the Cayley graphs.
//!
//! Elements are canonicalized by scaling so the first nonzero entry (in
//! a, b, c, d order) is 1, giving O(1) hashing and a total order used for
//! reproducible representative choices.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTable};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PglElement {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

impl PglElement {
    pub fn identity() -> PglElement {
        PglElement {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    /// The Weyl element (0, 1; -1, 0), canonicalized.
    pub fn weyl(f: &FieldTable) -> PglElement {
        canonicalize(f, 0, 1, f.neg(1), 0).unwrap()
    }

    pub fn entries(&self) -> [Elem; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

pub fn det(f: &FieldTable, g: PglElement) -> Elem {
    f.sub(f.mul(g.a, g.d), f.mul(g.b, g.c))
}

pub fn canonicalize(f: &FieldTable, a: Elem, b: Elem, c: Elem, d: Elem) -> Result<PglElement> {
    if f.sub(f.mul(a, d), f.mul(b, c)) == 0 {
        return Err(Error::SingularMatrix(a, b, c, d));
    }
    let lead = [a, b, c, d].into_iter().find(|&x| x != 0).unwrap();
    let s = f.inv(lead).unwrap();
    Ok(PglElement {
        a: f.mul(a, s),
        b: f.mul(b, s),
        c: f.mul(c, s),
        d: f.mul(d, s),
    })
}

pub fn mul(f: &FieldTable, x: PglElement, y: PglElement) -> PglElement {
    let a = f.add(f.mul(x.a, y.a), f.mul(x.b, y.c));
    let b = f.add(f.mul(x.a, y.b), f.mul(x.b, y.d));
    let c = f.add(f.mul(x.c, y.a), f.mul(x.d, y.c));
    let d = f.add(f.mul(x.c, y.b), f.mul(x.d, y.d));
    canonicalize(f, a, b, c, d).expect("product of invertible matrices is invertible")
}

pub fn inv(f: &FieldTable, g: PglElement) -> PglElement {
    // adjugate; the determinant scalar is killed by canonicalization
    canonicalize(f, g.d, f.neg(g.b), f.neg(g.c), g.a).expect("inverse of invertible matrix")
}

/// All of PGL2(F_q) in lexicographic order of canonical entries.
pub fn enumerate_group(f: &FieldTable) -> Vec<PglElement> {
    let q = f.q();
    let mut out = Vec::with_capacity((q * q * q - q) as usize);
    // a = 0: canonical form (0, 1, c, d) with c != 0
    for c in 1..q {
        for d in 0..q {
            out.push(PglElement { a: 0, b: 1, c, d });
        }
    }
    // a = 1: (1, b, c, d) with d != bc
    for b in 0..q {
        for c in 0..q {
            let bc = f.mul(b, c);
            for d in 0..q {
                if d != bc {
                    out.push(PglElement { a: 1, b, c, d });
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SubgroupKind {
    U,
    A,
    K,
}

impl SubgroupKind {
    pub fn order(&self, q: u32) -> u32 {
        match self {
            SubgroupKind::U => q,
            SubgroupKind::A => q - 1,
            SubgroupKind::K => q + 1,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SubgroupKind::U => "u",
            SubgroupKind::A => "a",
            SubgroupKind::K => "k",
        }
    }
}

/// Elements of the subgroup. K is the embedded image of E^x/F^x: matrices
/// (b, delta; 1, b) for b in F, plus the identity.
pub fn subgroup_elements(f: &FieldTable, delta: Elem, kind: SubgroupKind) -> Vec<PglElement> {
    match kind {
        SubgroupKind::U => f
            .elements()
            .map(|x| PglElement {
                a: 1,
                b: x,
                c: 0,
                d: 1,
            })
            .collect(),
        SubgroupKind::A => f
            .units()
            .map(|y| canonicalize(f, y, 0, 0, 1).unwrap())
            .collect(),
        SubgroupKind::K => {
            let mut v: Vec<PglElement> = f
                .elements()
                .map(|b| canonicalize(f, b, delta, 1, b).unwrap())
                .collect();
            v.push(PglElement::identity());
            v
        }
    }
}

/// The right-coset space G/H with lexicographically smallest representatives.
pub struct CosetSpace {
    pub kind: SubgroupKind,
    pub delta: Elem,
    pub reps: Vec<PglElement>,
    pub subgroup: Vec<PglElement>,
    index: HashMap<PglElement, u32>,
}

impl CosetSpace {
    pub fn build(f: &FieldTable, delta: Elem, kind: SubgroupKind) -> CosetSpace {
        let subgroup = subgroup_elements(f, delta, kind);
        let group = enumerate_group(f);
        let mut index: HashMap<PglElement, u32> = HashMap::with_capacity(group.len());
        let mut reps = Vec::with_capacity(group.len() / subgroup.len());
        for g in group {
            if index.contains_key(&g) {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(g);
            for &h in &subgroup {
                index.insert(mul(f, g, h), idx);
            }
        }
        CosetSpace {
            kind,
            delta,
            reps,
            subgroup,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn index_of(&self, g: PglElement) -> u32 {
        self.index[&g]
    }
}

/// A symmetric double coset HsH, stored as the sorted list of right-H-coset
/// indices it decomposes into.
#[derive(Clone, Debug)]
pub struct DoubleCoset {
    pub kind: SubgroupKind,
    pub cosets: Vec<u32>,
    pub symmetric: bool,
}

fn collect_cosets(
    f: &FieldTable,
    space: &CosetSpace,
    members: impl Iterator<Item = PglElement>,
) -> Result<Vec<u32>> {
    let mut cosets = Vec::new();
    for m in members {
        cosets.push(space.index_of(m));
    }
    cosets.sort_unstable();
    let before = cosets.len();
    cosets.dedup();
    if cosets.len() != before {
        return Err(Error::Construction(
            "repeated coset in parametric decomposition".into(),
        ));
    }
    let id_coset = space.index_of(PglElement::identity());
    if cosets.contains(&id_coset) {
        return Err(Error::Construction(
            "identity coset present, graph would have loops".into(),
        ));
    }
    let _ = f;
    Ok(cosets)
}

fn check_symmetric(f: &FieldTable, space: &CosetSpace, cosets: &[u32]) -> bool {
    cosets.iter().all(|&i| {
        let r = space.reps[i as usize];
        cosets.binary_search(&space.index_of(inv(f, r))).is_ok()
    })
}

/// Solutions (y, x) of (y+c)^2 - delta x^2 = c^2 - 1, in lexicographic order.
pub fn conic_solutions(f: &FieldTable, delta: Elem, c: Elem) -> Vec<(Elem, Elem)> {
    let rhs = f.sub(f.mul(c, c), 1);
    let mut out = Vec::new();
    for y in f.elements() {
        let yc = f.add(y, c);
        let lhs0 = f.mul(yc, yc);
        for x in f.elements() {
            if f.sub(lhs0, f.mul(delta, f.mul(x, x))) == rhs {
                out.push((y, x));
            }
        }
    }
    out
}

/// K_c = union of (y, delta x; 0, 1) K over conic solutions, for c != +-1.
pub fn k_double_coset(
    f: &FieldTable,
    delta: Elem,
    space: &CosetSpace,
    c: Elem,
) -> Result<DoubleCoset> {
    if c == 1 || c == f.neg(1) {
        return Err(Error::ForbiddenParam(c));
    }
    let sols = conic_solutions(f, delta, c);
    if sols.len() != (f.q() + 1) as usize {
        return Err(Error::Construction(format!(
            "conic has {} points, expected q+1 = {}",
            sols.len(),
            f.q() + 1
        )));
    }
    let members = sols
        .iter()
        .map(|&(y, x)| canonicalize(f, y, f.mul(delta, x), 0, 1))
        .collect::<Result<Vec<_>>>()?;
    let cosets = collect_cosets(f, space, members.into_iter())?;
    let symmetric = check_symmetric(f, space, &cosets);
    if !symmetric {
        return Err(Error::AsymmetricCoset);
    }
    Ok(DoubleCoset {
        kind: SubgroupKind::K,
        cosets,
        symmetric,
    })
}

/// U_t = union of (c, t; -1, 0) U over c in F, for t != 0.
pub fn u_double_coset(f: &FieldTable, space: &CosetSpace, t: Elem) -> Result<DoubleCoset> {
    if t == 0 {
        return Err(Error::ZeroParam);
    }
    let members = f
        .elements()
        .map(|c| canonicalize(f, c, t, f.neg(1), 0))
        .collect::<Result<Vec<_>>>()?;
    let cosets = collect_cosets(f, space, members.into_iter())?;
    if cosets.len() != f.q() as usize {
        return Err(Error::Construction(format!(
            "U_t decomposed into {} cosets, expected q = {}",
            cosets.len(),
            f.q()
        )));
    }
    let symmetric = check_symmetric(f, space, &cosets);
    if !symmetric {
        return Err(Error::AsymmetricCoset);
    }
    Ok(DoubleCoset {
        kind: SubgroupKind::U,
        cosets,
        symmetric,
    })
}

/// A_c = union of (x, x(delta-c); 1, 1-c) A over x in F^x, for c not in
/// {1, delta}. The coset count is measured, not assumed.
pub fn a_double_coset(
    f: &FieldTable,
    delta: Elem,
    space: &CosetSpace,
    c: Elem,
) -> Result<DoubleCoset> {
    if c == 1 || c == delta {
        return Err(Error::ForbiddenParam(c));
    }
    let members = f
        .units()
        .map(|x| canonicalize(f, x, f.mul(x, f.sub(delta, c)), 1, f.sub(1, c)))
        .collect::<Result<Vec<_>>>()?;
    let cosets = collect_cosets(f, space, members.into_iter())?;
    let symmetric = check_symmetric(f, space, &cosets);
    if !symmetric {
        return Err(Error::AsymmetricCoset);
    }
    Ok(DoubleCoset {
        kind: SubgroupKind::A,
        cosets,
        symmetric,
    })
}

/// Ground-truth decomposition of HsH by enumerating all h1 s h2. Used as the
/// oracle for the parametric constructors; no admissibility validation.
pub fn double_coset_of(f: &FieldTable, space: &CosetSpace, s: PglElement) -> DoubleCoset {
    let mut cosets = Vec::new();
    for &h1 in &space.subgroup {
        let left = mul(f, h1, s);
        cosets.push(space.index_of(left));
    }
    cosets.sort_unstable();
    cosets.dedup();
    let symmetric = check_symmetric(f, space, &cosets);
    DoubleCoset {
        kind: space.kind,
        cosets,
        symmetric,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: u32, e: u32) -> (FieldTable, Elem) {
        let f = FieldTable::build(p, e).unwrap();
        let d = f.find_nonsquare();
        (f, d)
    }

    #[test]
    fn canonical_form_and_group_axioms() {
        let (f, _) = setup(3, 1);
        // scalar matrix canonicalizes to the identity
        assert_eq!(
            canonicalize(&f, 2, 0, 0, 2).unwrap(),
            PglElement::identity()
        );
        assert!(matches!(
            canonicalize(&f, 1, 2, 2, 1),
            Err(Error::SingularMatrix(1, 2, 2, 1))
        ));
        // w^2 = -I = identity in PGL2
        let w = PglElement::weyl(&f);
        assert_eq!(mul(&f, w, w), PglElement::identity());
        // canonicalization is idempotent and scale-invariant
        let g = canonicalize(&f, 1, 2, 1, 0).unwrap();
        let scaled = canonicalize(&f, f.mul(2, 1), f.mul(2, 2), f.mul(2, 1), 0).unwrap();
        assert_eq!(g, scaled);
    }

    #[test]
    fn group_orders() {
        for (p, e, expect) in [(3u32, 1u32, 24usize), (5, 1, 120)] {
            let (f, _) = setup(p, e);
            let g = enumerate_group(&f);
            assert_eq!(g.len(), expect);
            // lex order and uniqueness
            for w in g.windows(2) {
                assert!(w[0] < w[1]);
            }
        }
    }

    #[test]
    fn subgroups_closed_and_sized() {
        for (p, e) in [(3u32, 1u32), (5, 1), (3, 2)] {
            let (f, d) = setup(p, e);
            let q = f.q();
            for kind in [SubgroupKind::U, SubgroupKind::A, SubgroupKind::K] {
                let elems = subgroup_elements(&f, d, kind);
                assert_eq!(elems.len() as u32, kind.order(q));
                for &h1 in &elems {
                    for &h2 in &elems {
                        let prod = mul(&f, h1, h2);
                        assert!(elems.contains(&prod), "{kind:?} closed under mul");
                        // abelian
                        assert_eq!(prod, mul(&f, h2, h1));
                    }
                }
            }
        }
    }

    #[test]
    fn k_is_cyclic_q3() {
        let (f, d) = setup(3, 1);
        let k = subgroup_elements(&f, d, SubgroupKind::K);
        assert_eq!(k.len(), 4);
        let has_order_4 = k.iter().any(|&g| {
            let g2 = mul(&f, g, g);
            g2 != PglElement::identity() && mul(&f, g2, g2) == PglElement::identity()
        });
        assert!(has_order_4);
    }

    #[test]
    fn coset_space_sizes() {
        let (f3, d3) = setup(3, 1);
        assert_eq!(CosetSpace::build(&f3, d3, SubgroupKind::K).len(), 6);
        let (f5, d5) = setup(5, 1);
        assert_eq!(CosetSpace::build(&f5, d5, SubgroupKind::U).len(), 24);
        assert_eq!(CosetSpace::build(&f5, d5, SubgroupKind::A).len(), 30);
        assert_eq!(CosetSpace::build(&f5, d5, SubgroupKind::K).len(), 20);
    }

    #[test]
    fn coset_index_covers_group() {
        let (f, d) = setup(3, 1);
        let space = CosetSpace::build(&f, d, SubgroupKind::K);
        for g in enumerate_group(&f) {
            let i = space.index_of(g);
            // g lies in reps[i] K
            let r = space.reps[i as usize];
            let h = mul(&f, inv(&f, r), g);
            assert!(space.subgroup.contains(&h));
        }
    }

    #[test]
    fn k_double_coset_q3() {
        let (f, d) = setup(3, 1);
        assert_eq!(d, 2);
        let sols = conic_solutions(&f, d, 0);
        assert_eq!(sols, vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
        let space = CosetSpace::build(&f, d, SubgroupKind::K);
        let dc = k_double_coset(&f, d, &space, 0).unwrap();
        assert_eq!(dc.cosets.len(), 4);
        assert!(dc.symmetric);
        assert!(matches!(
            k_double_coset(&f, d, &space, 1),
            Err(Error::ForbiddenParam(1))
        ));
        assert!(matches!(
            k_double_coset(&f, d, &space, 2),
            Err(Error::ForbiddenParam(2))
        ));
    }

    #[test]
    fn conic_has_q_plus_one_points() {
        for (p, e) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
            let (f, d) = setup(p, e);
            for c in f.elements() {
                if c == 1 || c == f.neg(1) {
                    continue;
                }
                assert_eq!(
                    conic_solutions(&f, d, c).len() as u32,
                    f.q() + 1,
                    "q={} c={c}",
                    f.q()
                );
                // (1, 0) never solves it: would need 2 + 2c = 0
                assert!(!conic_solutions(&f, d, c).contains(&(1, 0)));
            }
        }
    }

    #[test]
    fn u_double_cosets() {
        let (f, d) = setup(3, 1);
        let space = CosetSpace::build(&f, d, SubgroupKind::U);
        let dc = u_double_coset(&f, &space, 1).unwrap();
        assert_eq!(dc.cosets.len(), 3);
        assert!(dc.symmetric);
        assert!(matches!(
            u_double_coset(&f, &space, 0),
            Err(Error::ZeroParam)
        ));
        // inverse of (c, t; -1, 0) stays in U_t
        let m = canonicalize(&f, 1, 1, f.neg(1), 0).unwrap();
        let mi = inv(&f, m);
        assert!(dc.cosets.contains(&space.index_of(mi)));
    }

    #[test]
    fn diagonal_u_double_cosets_not_symmetric() {
        let (f, d) = setup(5, 1);
        let space = CosetSpace::build(&f, d, SubgroupKind::U);
        for r in f.units() {
            let s = canonicalize(&f, r, 0, 0, 1).unwrap();
            let dc = double_coset_of(&f, &space, s);
            let expect_symmetric = r == 1 || r == f.neg(1);
            assert_eq!(dc.symmetric, expect_symmetric, "U h_{r} U symmetry");
        }
    }

    #[test]
    fn a_double_cosets() {
        let (f, d) = setup(3, 1);
        let space = CosetSpace::build(&f, d, SubgroupKind::A);
        let dc = a_double_coset(&f, d, &space, 0).unwrap();
        // measured: q-1 cosets from x in F^x
        assert_eq!(dc.cosets.len(), 2);
        assert!(dc.symmetric);
        assert!(matches!(
            a_double_coset(&f, d, &space, 1),
            Err(Error::ForbiddenParam(1))
        ));
        assert!(matches!(
            a_double_coset(&f, d, &space, 2),
            Err(Error::ForbiddenParam(2))
        ));
    }

    #[test]
    fn parametric_cosets_match_generic_oracle() {
        for (p, e) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2)] {
            let (f, d) = setup(p, e);
            let kspace = CosetSpace::build(&f, d, SubgroupKind::K);
            for c in f.elements() {
                if c == 1 || c == f.neg(1) {
                    continue;
                }
                let dc = k_double_coset(&f, d, &kspace, c).unwrap();
                let (y, x) = conic_solutions(&f, d, c)[0];
                let s = canonicalize(&f, y, f.mul(d, x), 0, 1).unwrap();
                let oracle = double_coset_of(&f, &kspace, s);
                assert_eq!(dc.cosets, oracle.cosets, "K_{c} at q={}", f.q());
            }
            let uspace = CosetSpace::build(&f, d, SubgroupKind::U);
            for t in f.units() {
                let dc = u_double_coset(&f, &uspace, t).unwrap();
                let s = canonicalize(&f, 0, t, f.neg(1), 0).unwrap();
                let oracle = double_coset_of(&f, &uspace, s);
                assert_eq!(dc.cosets, oracle.cosets, "U_{t} at q={}", f.q());
            }
            let aspace = CosetSpace::build(&f, d, SubgroupKind::A);
            for c in f.elements() {
                if c == 1 || c == d {
                    continue;
                }
                let dc = a_double_coset(&f, d, &aspace, c).unwrap();
                let s = canonicalize(&f, 1, f.sub(d, c), 1, f.sub(1, c)).unwrap();
                let oracle = double_coset_of(&f, &aspace, s);
                assert_eq!(dc.cosets, oracle.cosets, "A_{c} at q={}", f.q());
            }
        }
    }

    #[test]
    fn h_id_h_is_single_coset() {
        let (f, d) = setup(5, 1);
        for kind in [SubgroupKind::U, SubgroupKind::A, SubgroupKind::K] {
            let space = CosetSpace::build(&f, d, kind);
            let dc = double_coset_of(&f, &space, PglElement::identity());
            assert_eq!(dc.cosets.len(), 1);
        }
    }

    #[test]
    fn double_coset_counts() {
        // the number of H-double cosets, counted by scanning all of G
        for (p, e) in [(3u32, 1u32), (5, 1)] {
            let (f, d) = setup(p, e);
            let q = f.q();
            for (kind, expected) in [
                (SubgroupKind::K, q as usize),
                (SubgroupKind::U, 2 * (q as usize - 1)),
                (SubgroupKind::A, q as usize + 4),
            ] {
                let space = CosetSpace::build(&f, d, kind);
                let mut seen = vec![false; space.len()];
                let mut count = 0;
                for i in 0..space.len() {
                    if seen[i] {
                        continue;
                    }
                    count += 1;
                    let dc = double_coset_of(&f, &space, space.reps[i]);
                    for &j in &dc.cosets {
                        seen[j as usize] = true;
                    }
                }
                assert_eq!(count, expected, "{kind:?} double cosets at q={q}");
            }
        }
    }

    #[test]
    fn uak_decomposition_covers_group() {
        for (p, e) in [(3u32, 1u32), (5, 1)] {
            let (f, d) = setup(p, e);
            let u = subgroup_elements(&f, d, SubgroupKind::U);
            let a = subgroup_elements(&f, d, SubgroupKind::A);
            let k = subgroup_elements(&f, d, SubgroupKind::K);
            let mut covered = std::collections::HashSet::new();
            for &x in &u {
                for &y in &a {
                    let xy = mul(&f, x, y);
                    for &z in &k {
                        covered.insert(mul(&f, xy, z));
                    }
                }
            }
            assert_eq!(
                covered.len(),
                enumerate_group(&f).len(),
                "G = UAK at q={}",
                f.q()
            );
        }
    }
}
