use dawk::automorphisms::{self, b3_word_action, pi, B3Word};
use dawk::geometry::VectorV;
use dawk::presentations::{
    eval_word, presentation_of, weyl_assignment, EllipticWeyl, Kind, Presentation,
};
use dawk::rewriting::{self, free_reduce, Budget, DerivationTrace, LemmaLibrary, Outcome};
use dawk::root_system::{load_catalog, LatticeVector};
use dawk::weyl::{DAWElement, DoubleAffineWeyl, GroupModel};
use dawk::word::{Letter, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

const TYPES: &[&str] = &["A2~1", "A3~1", "D4~1", "A2~2", "A4~2"];

fn groups() -> &'static Vec<DoubleAffineWeyl> {
    static G: OnceLock<Vec<DoubleAffineWeyl>> = OnceLock::new();
    G.get_or_init(|| {
        TYPES
            .iter()
            .map(|t| DoubleAffineWeyl::new(load_catalog(t).unwrap()))
            .collect()
    })
}

fn elements(t: usize, seed: u64, k: usize) -> Vec<DAWElement> {
    let g = &groups()[t];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| g.random_element(&mut rng)).collect()
}

fn word_strategy(gens: &'static [&'static str], max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens.len(), prop::bool::ANY), 0..=max).prop_map(move |v| {
        Word(
            v.into_iter()
                .map(|(i, inv)| Letter::new(gens[i], if inv { -1 } else { 1 }))
                .collect(),
        )
    })
}

fn b3_strategy(max: usize) -> impl Strategy<Value = B3Word> {
    word_strategy(&["a", "b"], max).prop_map(B3Word)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn free_reduction_shortens_and_is_idempotent(w1 in word_strategy(&["x", "y", "z"], 12), w2 in word_strategy(&["x", "y", "z"], 12)) {
        let r = free_reduce(&w1.concat(&w2));
        prop_assert!(r.len() <= w1.len() + w2.len());
        prop_assert_eq!(free_reduce(&r), r.clone());
        prop_assert!(free_reduce(&w1.concat(&w1.inverse())).is_empty());
    }

    #[test]
    fn multiplication_is_associative_with_inverses(t in 0..TYPES.len(), seed in any::<u64>()) {
        let g = &groups()[t];
        let e = elements(t, seed, 3);
        let (a, b, c) = (&e[0], &e[1], &e[2]);
        let ab_c = g.multiply(&g.multiply(a, b).unwrap(), c).unwrap();
        let a_bc = g.multiply(a, &g.multiply(b, c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(g.multiply(a, &g.inverse(a)).unwrap().is_identity());
        prop_assert_eq!(g.inverse(&g.inverse(a)), a.clone());
        prop_assert_eq!(g.multiply(a, &g.identity()).unwrap(), a.clone());
    }

    #[test]
    fn inverse_matches_closed_formula(t in 0..TYPES.len(), seed in any::<u64>()) {
        // (w, mu, beta, c)^-1 = (w^-1, -w mu, -w beta, -c + (beta, mu))
        let g = &groups()[t];
        let x = &elements(t, seed, 1)[0];
        let pair = g.data.bilinear(&x.beta, &x.mu).unwrap();
        let expect = DAWElement {
            w: x.w.inverse(),
            mu: LatticeVector::finite(x.w.act(&x.mu.coords).iter().map(|v| -v).collect()),
            beta: LatticeVector::finite(x.w.act(&x.beta.coords).iter().map(|v| -v).collect()),
            c: -x.c + pair,
        };
        prop_assert_eq!(g.inverse(x), expect);
    }

    #[test]
    fn rho_is_a_faithful_homomorphism(t in 0..TYPES.len(), seed in any::<u64>()) {
        let g = &groups()[t];
        let e = elements(t, seed, 2);
        let prod = g.multiply(&e[0], &e[1]).unwrap();
        prop_assert_eq!(g.rho(&prod), g.rho(&e[0]).compose(&g.rho(&e[1])));
        prop_assert_eq!(g.decode(&g.rho(&prod)).unwrap(), prod.clone());
        prop_assert!(g.data.preserves_form(&g.rho(&prod)));
    }

    #[test]
    fn word_eval_agrees_with_words_back(t in 0..TYPES.len(), seed in any::<u64>()) {
        let g = &groups()[t];
        let x = &elements(t, seed, 1)[0];
        let w = g.to_word(x).unwrap();
        prop_assert_eq!(g.word_eval(&w).unwrap(), x.clone());
    }

    #[test]
    fn elliptic_projection_is_multiplicative(t in 0..TYPES.len(), seed in any::<u64>()) {
        let g = &groups()[t];
        let e = elements(t, seed, 2);
        let ell = EllipticWeyl(g);
        let lhs = g.elliptic_project(&g.multiply(&e[0], &e[1]).unwrap());
        prop_assert_eq!(lhs, ell.mul(&g.elliptic_project(&e[0]), &g.elliptic_project(&e[1])));
        prop_assert!(g.rho(&g.from_generator_id("tau").unwrap()).is_identity_on_v00());
    }

    #[test]
    fn conjugate_reflection_is_reflection_of_image(t in 0..TYPES.len(), seed in any::<u64>(), i in 0usize..3) {
        // w s_a w^-1 = s_{w(a)}, on matrices
        let g = &groups()[t];
        let x = &elements(t, seed, 1)[0];
        let id = ["s01", "s02", "s03"][i];
        let root = g.data.affine_generator_root(id.parse().unwrap()).unwrap();
        let m = g.rho(x);
        let lhs = m.compose(&g.data.reflect(&root).unwrap()).compose(&m.inverse().unwrap());
        let image: VectorV = m.apply(&root.to_vector());
        prop_assert_eq!(lhs, g.data.reflect_vector(&image).unwrap());
    }

    #[test]
    fn pi_is_a_homomorphism(w1 in b3_strategy(8), w2 in b3_strategy(8)) {
        let w = B3Word(w1.0.concat(&w2.0));
        prop_assert_eq!(pi(&w), pi(&w1).mul(&pi(&w2)));
        prop_assert_eq!(pi(&w).det(), 1);
    }

    #[test]
    fn word_level_action_is_compatible_with_weyl_level(t in 0..TYPES.len(), w in b3_strategy(4)) {
        // composite word maps evaluated in the group = letter-by-letter transport
        let g = &groups()[t];
        let n = g.rank();
        let spec = b3_word_action(&w, n).unwrap();
        let up = automorphisms::b3_weyl_action(g, &w).unwrap();
        let triple = presentation_of(Kind::Triple, &g.data, 0).unwrap();
        let a = weyl_assignment(g, &triple).unwrap();
        for (k, img) in &spec.images {
            let via_words = eval_word(g, &a, img).unwrap();
            prop_assert_eq!(&via_words, &up[&format!("s{}", &k[1..])]);
        }
    }

    #[test]
    fn descent_diagram_commutes(t in 0..TYPES.len(), w in b3_strategy(10)) {
        let r = automorphisms::check_descent_diagram(&groups()[t], &w).unwrap();
        prop_assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn presentation_text_round_trips(t in 0..TYPES.len(), k in 0usize..Kind::ALL.len(), kb in 0u32..3) {
        let p = presentation_of(Kind::ALL[k], &groups()[t].data, kb).unwrap();
        let back = Presentation::from_text(&p.to_text()).unwrap();
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// Inserting a relator anywhere gives an equal word; whatever the
    /// search proves replays and holds in the Weyl group.
    #[test]
    fn search_is_sound(w in word_strategy(&["T0", "T1", "T2"], 5), rel in 0usize..6, pos in 0usize..6) {
        let g = &groups()[0];
        let p = presentation_of(Kind::AffineArtin, &g.data, 0).unwrap();
        let r = &p.relations[rel % p.relations.len()];
        let cut = pos.min(w.len());
        let w2 = Word(w.letters()[..cut].to_vec()).concat(&r.relator()).concat(&Word(w.letters()[cut..].to_vec()));
        let lib = LemmaLibrary::new();
        let budget = Budget { max_nodes: 20_000, ..Budget::default_for(&w, &w2) };
        if let Outcome::Proved { trace, .. } = rewriting::equal_modulo(&p, &lib, &w, &w2, budget).unwrap() {
            prop_assert!(rewriting::verify_derivation(&p, &trace, &lib).unwrap());
            let back = DerivationTrace::from_json_lines(&trace.to_json_lines()).unwrap();
            prop_assert_eq!(&back, &trace);
            let a = weyl_assignment(g, &p).unwrap();
            prop_assert_eq!(eval_word(g, &a, &trace.start).unwrap(), eval_word(g, &a, &trace.end).unwrap());
        }
    }
}
