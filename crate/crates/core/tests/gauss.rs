use qgauss::gauss::{gauss_decompose, verify_matrix_relations, GaussAlgebra, GaussContext, GaussNames, MinorKind};
use qgauss::presets::{Built, Preset};
use qgauss::qlinalg::sdet;
use qgauss::rmatrix::RMatrix;
use qgauss::{Budget, Exec, NcPoly};

fn derive(r: &RMatrix) -> GaussAlgebra {
    GaussAlgebra::derive(r, None, &GaussNames::default(), Budget::default()).unwrap()
}

#[test]
fn factors_multiply_back_in_every_mode() {
    for n in 2..=4 {
        let g = derive(&RMatrix::build_glq(n));
        let (f, report) = gauss_decompose(&g, MinorKind::Quantum).unwrap();
        assert!(report.passed(), "n = {n}: {:?}", report.failures().collect::<Vec<_>>());
        let mut red = g.relations().reducer();
        let prod = {
            let tl = &f.tl;
            let td = &f.td;
            let tu = &f.tu;
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .all(|(i, j)| {
                    let mut s = NcPoly::zero();
                    for a in 0..n {
                        for b in 0..n {
                            s = &s + &(&(tl.get(i, a) * td.get(a, b)) * tu.get(b, j));
                        }
                    }
                    red.reduce(&(&s - f.t.get(i, j))).unwrap().is_zero()
                })
        };
        assert!(prod);
        if n <= 3 {
            let seq = verify_matrix_relations(&g, &RMatrix::build_glq(n), None, Exec::Sequential).unwrap();
            let par = verify_matrix_relations(&g, &RMatrix::build_glq(n), None, Exec::default()).unwrap();
            assert_eq!(seq, par);
            assert!(seq.passed());
        }
    }
}

#[test]
fn triangular_factors_have_the_right_shape() {
    let g = derive(&RMatrix::build_glq(3));
    let (f, _) = gauss_decompose(&g, MinorKind::Quantum).unwrap();
    for i in 0..3 {
        assert_eq!(f.tl.get(i, i), &NcPoly::one());
        assert_eq!(f.tu.get(i, i), &NcPoly::one());
        for j in 0..3 {
            if i < j {
                assert!(f.tl.get(i, j).is_zero());
                assert!(f.tu.get(j, i).is_zero());
            }
            if i != j {
                assert!(f.td.get(i, j).is_zero());
            }
        }
    }
}

#[test]
fn gl_diagonal_factors_commute() {
    let g = derive(&RMatrix::build_glq(3));
    for i in 0..3 {
        for j in 0..3 {
            let a = NcPoly::generator(g.a_symbol(i));
            let b = NcPoly::generator(g.a_symbol(j));
            assert!(g.relations().normal_form(&(&(&a * &b) - &(&b * &a))).unwrap().is_zero());
        }
    }
    assert_eq!(g.independent().len(), 9);
}

#[test]
fn superdeterminant_of_gl11_is_central() {
    let b = Built::new(Preset::builtin("glq11", Budget::default()).unwrap(), Budget::default()).unwrap();
    let sd = sdet(&b.factors.td, b.gauss.relations()).unwrap();
    assert!(b.gauss.is_central(&sd).unwrap());
    let ctx = GaussContext::new(&b.gauss, b.preset.t_labels());
    let via_minor = ctx.eval("a^2*(a*d - q*gamma*beta)^-1").unwrap();
    assert_eq!(sd, via_minor);
}

#[test]
fn orthogonal_preset_needs_its_metric() {
    let so = Built::new(Preset::builtin("soq3", Budget::default()).unwrap(), Budget::default()).unwrap();
    let rep = verify_matrix_relations(&so.gauss, &so.preset.r, so.preset.metric.as_ref(), Exec::default()).unwrap();
    assert!(rep.passed());
    assert_eq!(so.gauss.independent().len(), 3);
    let ctx = GaussContext::new(&so.gauss, so.preset.t_labels());
    assert_eq!(ctx.eval("A[1]*A[3]").unwrap(), NcPoly::one());
    assert_eq!(ctx.eval("A[2]").unwrap(), NcPoly::one());
}

#[test]
fn symplectic_generator_count() {
    let sp = Built::new(Preset::builtin("spq2", Budget::default()).unwrap(), Budget::default()).unwrap();
    assert_eq!(sp.gauss.independent().len(), 10);
    let failing: Vec<_> = sp.report.deviations().map(|c| c.name.clone()).collect();
    assert_eq!(failing.len(), 2);
    assert!(sp.report.passed());
}

