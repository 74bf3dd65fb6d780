use matrix_diagrams::catalog::{catalog, mutations};
use matrix_diagrams::cousin::perversity_report;
use matrix_diagrams::diagram::validate;

#[test]
fn every_mutation_is_rejected() {
    let c = catalog().unwrap();
    let mut total = 0;
    let mut blind = Vec::new();
    for e in &c.entries {
        let s = c.strata_of(e);
        for (what, m) in mutations(s, &e.diagram).unwrap() {
            total += 1;
            assert!(!validate(s, &m).unwrap().passes(), "{} / {what}", e.name);
            let r = perversity_report(s, &m).unwrap();
            assert!(!r.verdicts.perverse, "{} / {what}", e.name);
            let v = r.verdicts;
            if v.constructible && v.p_minus && v.p_plus {
                blind.push(format!("{} / {what}", e.name));
            }
        }
    }
    assert!(total > 100, "{total}");
    assert!(blind.is_empty(), "sheaf-level verdicts miss {} of {total}: {blind:#?}", blind.len());
}
