use logicat::corpus::{self, FILES};
use logicat::dsl::{emit_logic, load, load_str, MorphismKind};
use logicat::search::Budget;
use logicat::Error;

#[test]
fn classical_file_has_two_logics_and_two_morphisms() {
    let env = corpus::classical();
    assert_eq!(env.logics.len(), 2);
    assert_eq!(env.morphisms.len(), 2);
    let h = env.morphism("h").unwrap();
    assert_eq!((h.source.as_str(), h.target.as_str()), ("CPL1", "CPL2"));
    assert_eq!(h.kind, MorphismKind::Flexible);
    assert_eq!(env.order, ["N", "D", "CPL1", "CPL2", "h", "k"]);
}

#[test]
fn loading_from_disk_matches_the_embedded_text() {
    let dir = std::env::temp_dir().join(format!("logicat-dsl-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, text) in FILES {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        let env = load(&path).unwrap();
        assert_eq!(env.order, load_str(text).unwrap().order);
    }
    assert!(load(dir.join("missing.logic")).is_err());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn duplicate_logic_name_is_an_error() {
    let text = format!("{}\nlogic CPL1 : N = top;\n", corpus::CLASSICAL);
    let err = load_str(&text).unwrap_err();
    assert!(err.to_string().contains("already declared"), "{err}");
}

#[test]
fn assignment_dropping_a_variable_violates_the_slice() {
    let text = format!(
        "{}\nmorphism bad : CPL1 -> CPL2 flexible {{ neg -> neg2(x0), imp -> or2(x0, x0) }}\n",
        corpus::CLASSICAL
    );
    let Error::Parse(e) = load_str(&text).unwrap_err() else { panic!("expected a parse error") };
    assert!(e.message.contains("exactly the variables"), "{}", e.message);
    assert_eq!(e.line, corpus::CLASSICAL.lines().count() + 2);
}

#[test]
fn reference_and_arity_errors() {
    let cases = [
        "logic L : Nowhere = top;",
        "signature S { a/1 } logic L : S { axiom A: a(x0, x1); }",
        "signature S { a/1 } logic L : S { axiom A: b(x0); }",
        "signature S { a/1 } morphism m : S -> T flexible { a -> a(x0) }",
        "signature S { a/1 } morphism m : S -> S strict { }",
        "signature S { a/1 } logic L : S { matrix { values 2; designated 1; table a = [1]; } }",
        "signature S { a/1, a/2 }",
        "signature S { a/1 } logic L : S { axiom A: a(x0) }",
    ];
    for text in cases {
        assert!(load_str(text).is_err(), "accepted: {text}");
    }
}

#[test]
fn strict_morphisms_keep_their_connective_map() {
    let text = "signature S { a/1, b/2 } signature T { c/1, d/2 }
        morphism m : S -> T strict { a -> c, b -> d }";
    let env = load_str(text).unwrap();
    let m = env.morphism("m").unwrap();
    assert_eq!(m.kind, MorphismKind::Strict);
    let strict = m.strict.as_ref().unwrap();
    assert_eq!(strict.apply(&"b".into()), Some(&"d".into()));
    assert_eq!(m.flexible.get(&"b".into()).unwrap().to_string(), "d(x0, x1)");
}

#[test]
fn every_corpus_logic_round_trips_through_emission() {
    let b = Budget::default();
    for (file, l) in corpus::all_logics() {
        let text = emit_logic(&l);
        let env = load_str(&text).unwrap_or_else(|e| panic!("{file}/{}: {e}\n{text}", l.name()));
        let Some(again) = env.logics.values().next() else { continue };
        assert_eq!(again.signature().len(), l.signature().len());
        assert_eq!(again.is_decidable(), l.is_decidable());
        assert_eq!(emit_logic(again).lines().skip(1).collect::<Vec<_>>(), text.lines().skip(1).collect::<Vec<_>>());
        if let Some(c) = l.calculus() {
            for a in c.axioms() {
                assert!(l.derives(&[], &a.formula, &b).unwrap().is_yes());
            }
        }
    }
}

#[test]
fn comments_do_not_shift_error_locations() {
    let text = "# header\nsignature S { a/1 } # trailing\nlogic L : S { axiom A: q(x0); }";
    let Error::Parse(e) = load_str(text).unwrap_err() else { panic!() };
    assert_eq!(e.line, 3);
}
