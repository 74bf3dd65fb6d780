use matrix_diagrams::catalog::catalog;
use matrix_diagrams::cousin::{compact_cohomology, perversity_report};
use matrix_diagrams::dirac::{to_dirac, to_dirac_morphism, validate_dirac};

#[test]
fn verdicts_match_expectations() {
    let c = catalog().unwrap();
    for e in &c.entries {
        let s = c.strata_of(e);
        let r = perversity_report(s, &e.diagram).unwrap();
        assert_eq!(r.verdicts.perverse, e.expect.perverse, "{}: {r:#?}", e.name);
        assert!(r.defects.is_empty(), "{}: {:?}", e.name, r.defects);
        let h = compact_cohomology(s, &e.diagram).unwrap();
        assert_eq!(h.euler_characteristic, h.stalk_euler_sum, "{}", e.name);
        if let Some(expected) = &e.expect.compact_cohomology {
            assert_eq!(&h.cohomology, expected, "{}", e.name);
        }
    }
}

#[test]
fn dirac_diagrams_of_line_entries() {
    let c = catalog().unwrap();
    for e in c.entries.iter().filter(|e| c.arrangement_name(e) == "line") {
        let dd = to_dirac(c.strata_of(e), &e.diagram).unwrap();
        assert!(validate_dirac(&dd).unwrap().passes(), "{}", e.name);
        assert_eq!(Some(dd.dims()), e.expect.dirac_dims, "{}", e.name);
    }
    for m in &c.morphisms {
        let (s, t) = (&c.entries[m.source], &c.entries[m.target]);
        if c.arrangement_name(s) != "line" {
            continue;
        }
        let st = c.strata_of(s);
        let dm = to_dirac_morphism(st, &m.morphism).unwrap();
        let (ds, dt) = (to_dirac(st, &s.diagram).unwrap(), to_dirac(st, &t.diagram).unwrap());
        assert!(dm.failures(&ds, &dt).unwrap().is_empty(), "{}", m.name);
    }
}
