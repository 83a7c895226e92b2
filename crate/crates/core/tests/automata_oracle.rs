mod common;

use common::*;
use phonlat_core::automata::{arcsort, compose, connect, shortest_path, text, Semiring, SortKey};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn compose_matches_path_pair_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (x, y, z) = (table(2), table(2), table(3));
    for semiring in [Semiring::Tropical, Semiring::Log] {
        for _ in 0..60 {
            let a = random_machine(&mut rng, semiring, 3, 5, &x, &y, true, 0.3);
            let b = random_machine(&mut rng, semiring, 3, 5, &y, &z, true, 0.3);
            let expected = join(&relation(&a, 6), &relation(&b, 6), semiring);
            let got = relation(&compose(&a, &b).unwrap(), 12);
            assert_relations_close(&got, &expected, 1e-9);
        }
    }
}

#[test]
fn compose_with_identity_acceptor_is_identity() {
    use phonlat_core::automata::{Arc, WfstBuilder};
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (x, y) = (table(3), table(3));
    let mut id = WfstBuilder::new(Semiring::Tropical, y.clone(), y.clone());
    let s = id.add_state();
    id.set_start(s);
    id.set_final(s, 0.0);
    for (l, _) in y.iter() {
        id.add_arc(s, Arc::new(l, l, 0.0, s));
    }
    let id = id.build().unwrap();
    for _ in 0..40 {
        let a = random_machine(&mut rng, Semiring::Tropical, 4, 7, &x, &y, true, 0.25);
        let got = relation(&compose(&a, &id).unwrap(), 12);
        assert_relations_close(&got, &relation(&a, 8), 0.0);
    }
}

#[test]
fn compose_is_associative_on_small_machines() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (w, x, y, z) = (table(2), table(2), table(2), table(2));
    for semiring in [Semiring::Tropical, Semiring::Log] {
        for _ in 0..40 {
            let a = random_machine(&mut rng, semiring, 4, 5, &w, &x, true, 0.3);
            let b = random_machine(&mut rng, semiring, 4, 5, &x, &y, true, 0.3);
            let c = random_machine(&mut rng, semiring, 4, 5, &y, &z, true, 0.3);
            let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            assert_relations_close(&relation(&left, 20), &relation(&right, 20), 1e-9);
        }
    }
}

#[test]
fn connect_and_arcsort_preserve_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (x, y) = (table(3), table(3));
    for semiring in [Semiring::Tropical, Semiring::Log] {
        for _ in 0..30 {
            let f = random_machine(&mut rng, semiring, 20, 35, &x, &y, false, 0.15);
            let before = relation(&f, 8);
            let connected = connect(&f);
            assert!(connected.num_states() <= f.num_states());
            assert_relations_close(&relation(&connected, 8), &before, 0.0);
            for key in [SortKey::Input, SortKey::Output] {
                assert_relations_close(&relation(&arcsort(&f, key), 8), &before, 0.0);
            }
        }
    }
}

#[test]
fn shortest_paths_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (x, y) = (table(3), table(3));
    for _ in 0..50 {
        let f = random_machine(&mut rng, Semiring::Tropical, 15, 30, &x, &y, true, 0.2);
        let mut all = enumerate_paths(&f, 64);
        all.sort_by(|a, b| a.2.total_cmp(&b.2).then_with(|| a.1.cmp(&b.1)).then_with(|| a.0.cmp(&b.0)));
        let got = shortest_path(&f, 5).unwrap();
        assert_eq!(got.len(), all.len().min(5));
        for (p, (is, os, w)) in got.iter().zip(&all) {
            assert_eq!(p.weight, *w);
            assert_eq!(&p.ostring, os);
            assert_eq!(&p.istring, is);
        }
        if let Some(best) = shortest_path(&f, 1).unwrap().first() {
            let min = all.iter().map(|p| p.2).fold(f64::INFINITY, f64::min);
            assert_eq!(best.weight, min);
        }
    }
}

#[test]
fn text_form_round_trips_random_machines() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (x, y) = (table(4), table(2));
    for semiring in [Semiring::Tropical, Semiring::Log] {
        for _ in 0..20 {
            let f = random_machine(&mut rng, semiring, 10, 25, &x, &y, false, 0.2);
            let once = text::write_text(&f);
            let parsed = text::read_text(&once, x.clone(), y.clone()).unwrap();
            assert_eq!(text::write_text(&parsed), once);
            // weights are eighths, so nine digits is lossless here
            assert_eq!(parsed, f);
        }
    }
}
