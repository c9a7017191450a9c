use std::sync::Arc;

use fourfold::metricdsl::{
    builtin, catalog_document, catalog_names, parse_expression, BinOp, Env, Expr, Func,
};
use fourfold::{load_metric_spec, ChartPoint, Jet, JetSpace, MetricSource, MetricSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 4] = ["x1", "x2", "r", "th"];

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000, 0u32..4).prop_map(|(m, e)| Expr::Num(m as f64 / 10f64.powi(e as i32))),
        (0usize..NAMES.len()).prop_map(|i| Expr::Ident(NAMES[i].to_string())),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (0usize..Func::ALL.len(), inner.clone())
                .prop_map(|(f, e)| Expr::Call(Func::ALL[f], Box::new(e))),
            (
                prop_oneof![
                    Just(BinOp::Add),
                    Just(BinOp::Sub),
                    Just(BinOp::Mul),
                    Just(BinOp::Div),
                    Just(BinOp::Pow)
                ],
                inner.clone(),
                inner
            )
                .prop_map(|(op, a, b)| Expr::Binary(op, Box::new(a), Box::new(b))),
        ]
    })
}

struct Reals<'a>(&'a [(&'a str, f64)]);

impl Env<f64> for Reals<'_> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
    fn constant(&self, v: f64) -> f64 {
        v
    }
}

struct Jets<'a> {
    space: Arc<JetSpace>,
    vars: &'a [(&'a str, f64)],
}

impl Env<Jet> for Jets<'_> {
    fn lookup(&self, name: &str) -> Option<Jet> {
        self.vars
            .iter()
            .position(|(n, _)| *n == name)
            .map(|i| self.space.variable(i, self.vars[i].1))
    }
    fn constant(&self, v: f64) -> Jet {
        self.space.constant(v)
    }
}

proptest! {
    #[test]
    fn printed_expressions_reparse_to_the_same_tree(e in expr_strategy()) {
        let text = e.to_string();
        let back = parse_expression(&text).unwrap();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn parser_never_panics(s in "\\PC{0,40}") {
        let _ = parse_expression(&s);
    }

    #[test]
    fn parser_never_panics_on_expression_alphabet(s in "[0-9a-z_.eE+*/^() ,-]{0,40}") {
        let _ = parse_expression(&s);
    }

    #[test]
    fn documents_never_panic(s in "[\\[\\]a-z0-9_=#,.+*/^() \n-]{0,120}") {
        let _ = MetricSpec::parse(&s);
        let _ = load_metric_spec(&s);
    }

    #[test]
    fn order_zero_jets_match_reals(
        e in expr_strategy(),
        vals in proptest::collection::vec(-3.0f64..3.0, 4),
    ) {
        let vars: Vec<(&str, f64)> = NAMES.iter().copied().zip(vals).collect();
        let real = e.eval(&Reals(&vars));
        let jet = e.eval(&Jets { space: JetSpace::cached(4, 0), vars: &vars });
        match (real, jet) {
            (Ok(a), Ok(b)) => prop_assert!(a == b.value() || (a - b.value()).abs() <= 1e-12 * a.abs()),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{e}: real {a:?} vs jet {:?}", b.map(|j| j.value())),
        }
    }

    #[test]
    fn generated_documents_round_trip(
        diag in proptest::collection::vec(expr_strategy(), 2),
        off in expr_strategy(),
    ) {
        let rows = [
            [diag[0].to_string(), off.to_string()],
            [off.to_string(), diag[1].to_string()],
        ];
        let doc = format!(
            "[metric]\nname = p\ndim = 2\ncoords = [x1, x2]\norientation = -1\n\
             g = [[{}, {}], [{}, {}]]\n\n[params]\nr = 2\nth = r/3\n",
            rows[0][0], rows[0][1], rows[1][0], rows[1][1]
        );
        let spec = MetricSpec::parse(&doc).unwrap();
        let again = MetricSpec::parse(&spec.to_document()).unwrap();
        prop_assert_eq!(again, spec);
    }
}

#[test]
fn catalog_documents_round_trip() {
    for name in catalog_names() {
        let spec = MetricSpec::parse(catalog_document(name).unwrap()).unwrap();
        let printed = spec.to_document();
        assert_eq!(MetricSpec::parse(&printed).unwrap(), spec, "{name}");
        let field = builtin(name, &[]).unwrap();
        let reloaded = load_metric_spec(&field.to_spec().to_document()).unwrap();
        assert_eq!(reloaded.components(), field.components(), "{name}");
        assert_eq!(
            reloaded.suggested_points(),
            field.suggested_points(),
            "{name}"
        );
    }
}

/// Points of the chart near the suggested ones, inside the declared domain.
fn random_points(m: &fourfold::MetricField, count: usize, seed: u64) -> Vec<ChartPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = m.suggested_points();
    let mut out = Vec::new();
    while out.len() < count {
        let b = &base[rng.gen_range(0..base.len())];
        let p = ChartPoint::new(
            b.coords()
                .iter()
                .map(|x| x + rng.gen_range(-0.2..0.2))
                .collect(),
        );
        if m.check_domain(&p).is_ok() {
            out.push(p);
        }
    }
    out
}

#[test]
fn order_zero_jets_match_plain_evaluation_on_the_catalog() {
    for name in catalog_names() {
        let m = builtin(name, &[]).unwrap();
        let coords = m.coordinate_names();
        let mut vars: Vec<(&str, f64)> = coords.iter().map(|c| (c.as_str(), 0.0)).collect();
        let params: Vec<(&str, f64)> = m
            .parameters()
            .iter()
            .map(|(n, v)| (n.as_str(), *v))
            .collect();
        for p in random_points(&m, 1000, 7) {
            for (slot, x) in vars.iter_mut().zip(p.coords()) {
                slot.1 = *x;
            }
            let mut all = vars.clone();
            all.extend(params.iter().copied());
            all.push(("pi", std::f64::consts::PI));
            for row in m.components() {
                for e in row {
                    let real = e.eval(&Reals(&all)).unwrap();
                    let jet = e
                        .eval(&Jets {
                            space: JetSpace::cached(all.len(), 0),
                            vars: &all,
                        })
                        .unwrap();
                    assert!(
                        real == jet.value() || (real - jet.value()).abs() <= 1e-13 * real.abs(),
                        "{name}: {e}"
                    );
                }
            }
        }
    }
}

#[test]
fn jet_partials_match_central_differences() {
    let h = 1e-5;
    for name in catalog_names() {
        let m = builtin(name, &[]).unwrap();
        for p in random_points(&m, 10, 11) {
            let g = m.metric_jets(&p, 1).unwrap();
            for a in 0..4 {
                let plus = m.evaluate(&p.shifted(a, h)).unwrap();
                let minus = m.evaluate(&p.shifted(a, -h)).unwrap();
                for i in 0..4 {
                    for j in 0..4 {
                        let fd = (plus[(i, j)] - minus[(i, j)]) / (2.0 * h);
                        let exact = g[i][j].partial(&[a]);
                        assert!(
                            (fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()),
                            "{name} d{a} g{i}{j}: {exact} vs {fd}"
                        );
                    }
                }
            }
        }
    }
}
