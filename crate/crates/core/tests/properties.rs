//! Property tests over random matrices, subspaces, modules and cocycles.

use std::sync::Arc;

use proptest::prelude::*;

use pgv_core::cohomology::{coboundary1, cohomology, is_derivation, is_two_cocycle, z1_all_pairs, TwoCocycle};
use pgv_core::extensions::{build_extension, transfer_maps};
use pgv_core::fp_linalg::{FpMatrix, FpSubspace};
use pgv_core::gmodule::{sample_ng_module, AnnSide, FreeBimodule, GModule};
use pgv_core::group::{GroupTable, PcPresentation};

fn grp(p: u32, n: usize, pows: &[(usize, &str)], comms: &[(usize, usize, &str)]) -> Arc<GroupTable> {
    Arc::new(PcPresentation::parse_relations(p, n, pows, comms).unwrap().build().unwrap())
}

fn group(k: usize) -> Arc<GroupTable> {
    match k % 7 {
        0 => grp(2, 1, &[], &[]),
        1 => grp(3, 1, &[], &[]),
        2 => grp(2, 2, &[(0, "g2")], &[]),
        3 => grp(2, 2, &[], &[]),
        4 => grp(2, 3, &[(1, "g3")], &[(1, 0, "g3")]),
        5 => grp(2, 3, &[(0, "g3"), (1, "g3")], &[(1, 0, "g3")]),
        _ => grp(3, 2, &[], &[]),
    }
}

fn matrix(p: u32) -> impl Strategy<Value = FpMatrix> {
    (1usize..7, 1usize..7).prop_flat_map(move |(r, c)| {
        prop::collection::vec(0..p, r * c).prop_map(move |data| FpMatrix::from_flat(p, r, c, data))
    })
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

fn vectors(p: u32, dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0..p, dim), 0..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in prime().prop_flat_map(matrix)) {
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.cols());
        prop_assert_eq!(m.rank() + m.left_kernel().dim(), m.rows());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in m.kernel().basis_vecs() {
            prop_assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_returns_solutions(m in prime().prop_flat_map(matrix), seed in 0u32..1000) {
        let x: Vec<u32> = (0..m.cols()).map(|i| (seed + 7 * i as u32) % m.p()).collect();
        let b = m.mul_vec(&x);
        let y = m.solve(&b).expect("consistent system");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn inverse_is_two_sided(p in prime(), n in 1usize..6, data in prop::collection::vec(0u32..7, 36)) {
        let m = FpMatrix::from_flat(p, n, n, data[..n * n].iter().map(|x| x % p).collect());
        match m.inverse() {
            Some(inv) => {
                prop_assert!(m.mul(&inv).is_identity());
                prop_assert!(inv.mul(&m).is_identity());
            }
            None => prop_assert!(m.rank() < n),
        }
    }

    #[test]
    fn subspace_dimension_formula(
        (p, a, b) in prime().prop_flat_map(|p| (Just(p), vectors(p, 6, 5), vectors(p, 6, 5)))
    ) {
        let a = FpSubspace::from_spanning(p, 6, &a);
        let b = FpSubspace::from_spanning(p, 6, &b);
        let sum = a.sum(&b);
        let meet = a.intersect(&b);
        prop_assert_eq!(sum.dim() + meet.dim(), a.dim() + b.dim());
        prop_assert!(sum.contains(&a) && a.contains(&meet) && b.contains(&meet));
        prop_assert_eq!(a.perp().perp(), a.clone());
        prop_assert_eq!(a.perp().dim() + a.dim(), 6);
    }

    #[test]
    fn solver_matches_full_system(k in 0usize..7, seed in 0u64..200, n in 1usize..3) {
        let g = group(k);
        let m = sample_ng_module(&g, n, seed).unwrap().module;
        let h = cohomology(&m, 1).unwrap();
        prop_assert_eq!(&h.z, &z1_all_pairs(&m));
        prop_assert_eq!(h.b_dim(), m.dim() - m.fixed_points().dim());
        for tau in h.z_derivations() {
            prop_assert!(is_derivation(&m, &tau));
        }
    }

    #[test]
    fn coboundaries_are_derivations(k in 0usize..7, coords in prop::collection::vec(0u32..3, 8)) {
        let g = group(k);
        let m = GModule::regular(g.clone());
        let v: Vec<u32> = (0..m.dim()).map(|i| coords[i % coords.len()] % g.p()).collect();
        prop_assert!(is_derivation(&m, &coboundary1(&m, &v)));
    }

    #[test]
    fn annihilators_round_trip(k in 0usize..7, n in 1usize..3, seed in prop::collection::vec(0u32..3, 1..40)) {
        let g = group(k);
        let free = FreeBimodule::new(g.clone(), n);
        let right = free.right_module();
        let gens: Vec<Vec<u32>> = seed.chunks(free.dim().min(seed.len()))
            .map(|c| (0..free.dim()).map(|i| c.get(i).copied().unwrap_or(0) % g.p()).collect())
            .collect();
        let q = right.submodule_generated(&gens);
        let l = free.annihilator(&q, AnnSide::LeftOfRight).unwrap();
        prop_assert!(free.left_module().is_submodule(&l));
        prop_assert_eq!(l.dim() + q.dim(), free.dim());
        prop_assert_eq!(free.annihilator(&l, AnnSide::RightOfLeft).unwrap(), q);
    }

    #[test]
    fn dual_swaps_fixed_points_and_generators(k in 0usize..7, seed in 0u64..200) {
        let g = group(k);
        let m = sample_ng_module(&g, 1, seed).unwrap().module;
        prop_assert_eq!(m.dual().fixed_points().dim(), m.d_g());
        prop_assert_eq!(m.dual().d_g(), m.fixed_points().dim());
    }

    #[test]
    fn extensions_from_random_cocycles(k in 0usize..7, t in 1usize..3, coords in prop::collection::vec(0u32..3, 0..6)) {
        let g = group(k);
        let m = GModule::trivial(g.clone(), t);
        let space = cohomology(&m, 2).unwrap();
        let mut f = TwoCocycle::zero(g.order(), t);
        for (c, z) in coords.iter().zip(space.z_cocycles()) {
            for (dst, src) in f.table.iter_mut().zip(&z.table) {
                *dst = (*dst + c * src) % g.p();
            }
        }
        prop_assert!(is_two_cocycle(&m, &f));
        let ext = build_extension(&m, &f).unwrap();
        let e = &ext.total;
        prop_assert_eq!(e.order(), g.p().pow(t as u32) as usize * g.order());
        for x in e.elements() {
            for y in e.elements() {
                let img = ext.projection.apply(e.mul(x, y));
                prop_assert_eq!(img, g.mul(ext.projection.apply(x), ext.projection.apply(y)));
            }
        }
        for a in ext.kernel_generators() {
            prop_assert!(e.elements().all(|x| e.mul(a, x) == e.mul(x, a)));
        }
        let tp = transfer_maps(&ext, 1);
        prop_assert!(tp.up.mul(&tp.down).is_zero());
        prop_assert_eq!(tp.kernel_of_down(), tp.filtration(1).unwrap());
    }
}
