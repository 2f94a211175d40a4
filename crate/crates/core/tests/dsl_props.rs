use coxforge::coxeter::{CoxeterMatrix, Label};
use coxforge::dsl::{parse, render};
use proptest::prelude::*;

fn label() -> impl Strategy<Value = Label> {
    prop_oneof![(2u32..=12).prop_map(Label::Finite), Just(Label::Infinity)]
}

fn matrix() -> impl Strategy<Value = CoxeterMatrix> {
    (1usize..=7).prop_flat_map(|n| {
        prop::collection::vec(label(), n * (n - 1) / 2).prop_map(move |u| CoxeterMatrix::from_upper_triangle(n, &u))
    })
}

fn named() -> impl Strategy<Value = CoxeterMatrix> {
    matrix().prop_map(|m| {
        let names = (0..m.rank()).map(|i| format!("g{i}")).collect();
        m.with_names(names)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matrix_form_round_trips(m in matrix()) {
        prop_assert_eq!(parse(&render(&m)).unwrap(), m);
    }

    #[test]
    fn diagram_form_round_trips(m in named()) {
        let text = render(&m);
        prop_assert!(text.starts_with("vertices"));
        prop_assert_eq!(parse(&text).unwrap(), m);
    }

    #[test]
    fn semicolons_and_newlines_are_interchangeable(m in matrix()) {
        let text = render(&m);
        prop_assert_eq!(parse(&text.replace('\n', " ; ")).unwrap(), m);
    }

    #[test]
    fn arbitrary_text_never_panics(s in "\\PC{0,200}") {
        let _ = parse(&s);
    }

    #[test]
    fn token_soup_never_panics(words in prop::collection::vec(
        prop_oneof![
            Just("matrix".to_string()), Just("vertices".to_string()), Just("edge".to_string()),
            Just("inf".to_string()), Just(";".to_string()), Just("\n".to_string()), Just("#".to_string()),
            "[a-c]", "[0-9]{1,12}",
        ], 0..30)) {
        let _ = parse(&words.join(" "));
    }

    #[test]
    fn errors_point_inside_the_input(s in "[a-z0-9 ;\n]{0,80}") {
        if let Err(e) = parse(&s) {
            let lines: Vec<&str> = s.lines().collect();
            prop_assert!(e.line >= 1);
            if let Some(line) = lines.get(e.line - 1) {
                prop_assert!(e.column >= 1 && e.column <= line.chars().count() + 1);
            }
        }
    }
}

#[test]
fn every_error_class_is_reported() {
    let cases = [
        ("vertices s t\nedge s t 1", "below 2"),
        ("vertices s t\nedge s q 3", "unknown vertex"),
        ("vertices s t\nedge s t 3\nedge t s 3", "duplicate"),
        ("vertices s\nedge s s 3", "self-edge"),
        ("matrix 2\n3 3", "needs 1 entries"),
        ("matrix two", "expected a rank"),
        ("graph", "expected `matrix` or `vertices`"),
    ];
    for (src, needle) in cases {
        let e = parse(src).unwrap_err();
        assert!(e.message.contains(needle), "{src:?}: {e}");
    }
}
