use std::sync::Arc;

use pgv_core::gmodule::{FreeBimodule, GModule};
use veriflab::checks::{annihilator_duality_on, reverify};
use veriflab::{registry, run_check, Catalog, CheckVerdict, Error, Instance, Status};

fn run(id: &str, group: &str, n: usize, t: usize) -> CheckVerdict {
    let instance = Instance { n, t, ..Instance::new(group, 0) };
    run_check(id, Catalog::builtin(), &instance).unwrap()
}

#[test]
fn index_bound_on_cyclic_maximal_of_d16() {
    let g = &Catalog::builtin().get("D16").unwrap().group;
    let cyclic = g.maximal_subgroups().into_iter().find(|m| m.is_cyclic(g)).unwrap();
    let instance = Instance { subgroup: Some(cyclic.members().to_vec()), ..Instance::new("D16", 0) };
    let v = run_check("iset_index_bound", Catalog::builtin(), &instance).unwrap();
    assert_eq!(v.status, Status::Pass, "{:?}", v.details);
    assert!(v.details.contains_key("log_index"));
    assert!(v.details.contains_key("bound"));
}

#[test]
fn duality_on_the_augmentation_ideal_of_c2() {
    let g = Arc::clone(&Catalog::builtin().get("C2").unwrap().group);
    let free = FreeBimodule::new(g.clone(), 1);
    let q = GModule::regular(g).radical();
    let (ok, d) = annihilator_duality_on(&free, &q).unwrap();
    assert!(ok);
    assert_eq!(d["size_l"], 2);
    assert_eq!(d["size_product"], 4);
}

#[test]
fn existence_passes_on_nonabelian_and_skips_abelian() {
    assert_eq!(run("outer_order_p_exists", "D8", 1, 1).status, Status::Pass);
    assert_eq!(run("outer_order_p_exists", "C2xC2", 1, 1).status, Status::SkippedHypothesis);
}

#[test]
fn unknown_inputs_are_errors() {
    let i = Instance::new("D8", 0);
    assert!(matches!(run_check("nope", Catalog::builtin(), &i), Err(Error::UnknownCheck(_))));
    let i = Instance::new("Nope", 0);
    assert!(matches!(run_check("outer_order_p_exists", Catalog::builtin(), &i), Err(Error::UnknownGroup(_))));
}

#[test]
fn every_check_is_supported_and_deterministic_on_q8() {
    for spec in registry() {
        let a = run(spec.id, "Q8", 1, 1);
        assert_ne!(a.status, Status::Unsupported, "{}: {:?}", spec.id, a.details);
        assert_eq!(a, run(spec.id, "Q8", 1, 1), "{}", spec.id);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<CheckVerdict>(&text).unwrap(), a);
    }
}

#[test]
fn rank_one_kernel_growth_fails_on_cyclic_base() {
    // With t = 1 over a cyclic base the extension is cyclic and the claimed
    // strict growth does not happen.
    let v = run("extension_h1_growth_rank_t", "C4", 2, 1);
    assert_eq!(v.status, Status::Counterexample, "{:?}", v.details);
    assert!(reverify(&v, Catalog::builtin()).unwrap());
    assert!(v.details["h1_ext"].as_u64() < v.details["bound"].as_u64());
}

#[test]
fn module_checks_pass_on_small_groups() {
    for id in ["generator_count", "free_embedding", "h1_zero_free", "dual_fixed_points", "annihilator_duality", "h1_annihilator_generators"] {
        for g in ["C4", "C2xC2", "D8", "C9"] {
            let v = run(id, g, 2, 1);
            assert_eq!(v.status, Status::Pass, "{id} on {g}: {:?}", v.details);
        }
    }
}

#[test]
fn transfer_checks_pass() {
    for id in ["kernel_expansion_unique", "up_image_free", "filtration_products", "filtration_first_layer", "filtration_layers_rank2"] {
        for g in ["C2", "C3", "C2xC2", "D8"] {
            let v = run(id, g, 1, 2);
            assert_eq!(v.status, Status::Pass, "{id} on {g}: {:?}", v.details);
        }
    }
}
