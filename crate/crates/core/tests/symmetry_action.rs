//! `A` satisfies `g(c)` exactly when `g^-1(A)` satisfies `c`, checked on
//! every assignment of small scopes.

use proptest::prelude::*;
use proptest::sample::subsequence;

use symbreak::constraints::{CmpOp, Constraint, Term};
use symbreak::store::VarId;
use symbreak::symmetry::{Symmetry, ValueMap};

const D: i32 = 5;

fn assignments(k: usize) -> impl Iterator<Item = Vec<i32>> {
    (0..(D as usize).pow(k as u32)).map(move |mut code| {
        (0..k)
            .map(|_| {
                let v = (code % D as usize) as i32;
                code /= D as usize;
                v
            })
            .collect()
    })
}

fn arb_op() -> impl Strategy<Value = CmpOp> {
    prop_oneof![Just(CmpOp::Lt), Just(CmpOp::Le), Just(CmpOp::Eq), Just(CmpOp::Ne)]
}

fn arb_term(k: usize) -> impl Strategy<Value = Term> {
    prop_oneof![
        (0..k as u32).prop_map(|v| Term::var(VarId(v))),
        (0..k as u32, 0..D).prop_map(|(v, o)| Term::neg(VarId(v), o)),
        (-1..=D).prop_map(Term::Const),
    ]
}

fn arb_cmp(k: usize) -> impl Strategy<Value = Constraint> {
    (arb_term(k), arb_op(), arb_term(k)).prop_map(|(l, op, r)| Constraint::cmp(l, op, r))
}

fn arb_constraint(k: usize) -> impl Strategy<Value = Constraint> {
    let vars: Vec<VarId> = (0..k as u32).map(VarId).collect();
    prop_oneof![
        arb_cmp(k),
        (arb_cmp(k), arb_cmp(k)).prop_map(|(h, c)| Constraint::implies(h, c)),
        (1..=k).prop_flat_map(move |len| {
            (prop::collection::vec(arb_term(k), len), prop::collection::vec(arb_term(k), len))
                .prop_map(|(l, r)| Constraint::lex_le(l, r))
        }),
        subsequence(vars.clone(), 1..=k).prop_map(Constraint::AllDifferent),
        subsequence(vars, 1..=k)
            .prop_flat_map(|vs| {
                let n = vs.len();
                (Just(vs), prop::collection::vec(0..D, n))
            })
            .prop_map(|(vs, vals)| Constraint::Nogood(vs.into_iter().zip(vals).collect())),
    ]
}

fn arb_symmetry(k: usize) -> impl Strategy<Value = Symmetry> {
    let perm = Just((0..k).collect::<Vec<usize>>()).prop_shuffle();
    let map = prop_oneof![
        Just(ValueMap::Identity),
        Just(ValueMap::Affine { scale: -1, offset: D - 1 }),
        Just((0..D).collect::<Vec<i32>>()).prop_shuffle().prop_map(|map| ValueMap::Table { lo: 0, map }),
    ];
    (perm, map).prop_map(|(p, m)| Symmetry::new(p, m).unwrap())
}

fn case() -> impl Strategy<Value = (Constraint, Symmetry)> {
    (1..=4usize).prop_flat_map(|k| (arb_constraint(k), arb_symmetry(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn image_is_satisfied_by_mapped_assignments((c, g) in case()) {
        let scope: Vec<VarId> = (0..g.len() as u32).map(VarId).collect();
        // non-affine value maps are refused on arithmetic forms
        let Ok(image) = c.apply_symmetry(&g, &scope) else {
            let affine = matches!(g.value_map(), ValueMap::Identity | ValueMap::Affine { .. });
            prop_assert!(!affine);
            return Ok(());
        };
        let inv = g.invert();
        for a in assignments(g.len()) {
            prop_assert_eq!(image.check(&a), c.check(&inv.apply_to_assignment(&a)), "A = {:?}, image {:?}", a, image);
        }
    }

    #[test]
    fn identity_leaves_constraints_fixed(c in (1..=4usize).prop_flat_map(arb_constraint)) {
        let k = 4;
        let scope: Vec<VarId> = (0..k as u32).map(VarId).collect();
        let image = c.apply_symmetry(&Symmetry::identity(k), &scope).unwrap();
        prop_assert_eq!(image, c.normalized());
    }
}
