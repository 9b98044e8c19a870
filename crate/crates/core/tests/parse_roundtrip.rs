use holodisk::holomap::{parse_map, MapExpr};
use holodisk::Complex;
use proptest::prelude::*;

const CORPUS: [&str; 30] = [
    "z",
    "1",
    "-z",
    "i*z",
    "0.5*z+0.5",
    "z^2-1",
    "z-1",
    "(z+0.3)/(1+0.3*z)",
    "z/(2-z)",
    "0.5*(z+1)+0.05*(z-1)^4",
    "z-0.05*(z-1)^3",
    "(z^2-1)-(1-z)^2-(1-z)^3",
    "-i*(1-z)^2",
    "cayley(z)",
    "cayinv(cayley(z)+0.5)",
    "cayinv(cayley(z)/0.5+0.3*i)",
    "compose(z^2,0.5*z)",
    "(1+z)^2/4",
    "2*cayley(z)+1",
    "cayley(z)+2+(1-z)^2",
    "1/(1-z)",
    "(1-z)/(2-z)",
    "0.5*(1-z^2)",
    "(0.2+0.1i)*z^3",
    "-(z-1)^2*(z+1)",
    "z*z*z-z",
    "((z))",
    "(z-0.5*i)/(1+0.5*i*z)",
    "3-2*z+z^2/7",
    "compose(cayinv(z),cayley(0.5*z))",
];

fn probes() -> [Complex; 4] {
    [Complex::new(0.1, 0.2), Complex::new(-0.4, 0.3), Complex::new(0.6, -0.1), Complex::new(0.0, -0.7)]
}

fn same_values(a: &MapExpr, b: &MapExpr) -> bool {
    probes().iter().all(|&z| match (a.eval(z), b.eval(z)) {
        (Ok(x), Ok(y)) => (x - y).norm() <= 1e-12 * x.norm().max(1.0),
        (Err(_), Err(_)) => true,
        _ => false,
    })
}

#[test]
fn print_parse_is_idempotent_on_corpus() {
    for text in CORPUS {
        let e = parse_map(text).unwrap_or_else(|err| panic!("{text}: {err}"));
        let printed = e.to_string();
        let again = parse_map(&printed).unwrap_or_else(|err| panic!("{printed}: {err}"));
        assert_eq!(again.to_string(), printed, "{text}");
        assert!(same_values(&e, &again), "{text} vs {printed}");
    }
}

#[test]
fn whitespace_is_ignored() {
    let a = parse_map("( z + 0.3 ) / ( 1 + 0.3 * z )").unwrap();
    let b = parse_map("(z+0.3)/(1+0.3*z)").unwrap();
    assert_eq!(a, b);
}

fn leaf() -> impl Strategy<Value = MapExpr> {
    prop_oneof![
        Just(MapExpr::Var),
        (-3i32..=3, -3i32..=3).prop_map(|(re, im)| MapExpr::constant(Complex::new(re as f64 / 2.0, im as f64 / 4.0))),
    ]
}

fn tree() -> impl Strategy<Value = MapExpr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MapExpr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MapExpr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| MapExpr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 1u32..4).prop_map(|(a, n)| MapExpr::Pow(Box::new(a), n)),
            inner.clone().prop_map(|a| MapExpr::Cayley(Box::new(a))),
        ]
    })
}

proptest! {
    #[test]
    fn printed_trees_reparse_to_the_same_function(e in tree()) {
        let printed = e.to_string();
        let again = parse_map(&printed).unwrap();
        prop_assert_eq!(again.to_string(), printed.clone());
        prop_assert!(same_values(&e, &again), "{}", printed);
    }
}
