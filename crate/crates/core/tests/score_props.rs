mod common;

use common::*;
use proptest::prelude::*;
use qmusic::score::{parse, pretty_print, validate};
use rand::rngs::StdRng;
use rand::SeedableRng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reprint_parses_to_same_score(seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = random_score(&mut rng);
        prop_assert_eq!(validate(&s), vec![]);
        let text = pretty_print(&s);
        let back = parse(&text);
        prop_assert_eq!(back.as_ref(), Ok(&s), "{}", text);
        prop_assert_eq!(pretty_print(&back.unwrap()), text);
    }

    #[test]
    fn parser_is_total_on_generated_noise(seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let src = fuzz_input(&mut rng);
        prop_assert!(check_total(&src).is_ok(), "{}", check_total(&src).unwrap_err());
    }

    #[test]
    fn parser_is_total_on_arbitrary_strings(src in "\\PC{0,120}") {
        prop_assert!(check_total(&src).is_ok(), "{}", check_total(&src).unwrap_err());
    }
}

#[test]
fn deep_nesting_is_rejected_not_overflowed() {
    let src = format!("model modes\ntempo 60\nvoice v {{ {}c{} q }}", "X(".repeat(100_000), ")".repeat(100_000));
    let errs = parse(&src).unwrap_err();
    assert!(errs.iter().any(|e| e.message.contains("nest")), "{errs:?}");
    check_total(&src).unwrap();
}

#[test]
fn errors_are_collected_across_voices() {
    let src =
        "model bundled 7\ntempo 120\nvoice a { sup{0.8 c, 0.8 g} q }\nvoice b { occ(c, 1, 0) q }\nvoice c { c z }";
    let errs = parse(src).unwrap_err();
    let lines: Vec<usize> = errs.iter().map(|e| e.line).collect();
    assert!(lines.contains(&3) && lines.contains(&4) && lines.contains(&5), "{errs:?}");
}
