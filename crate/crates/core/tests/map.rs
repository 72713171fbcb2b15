use num_complex::Complex64;
use spincav::*;

#[test]
fn kron_orders_factors_most_significant_first() {
    let x = LocalMap::<f64>::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
    let id = LocalMap::identity(2);
    let xi = x.kron(&id);
    // |00> -> |10>
    assert_eq!(xi.apply(&[re(1.0), re(0.0), re(0.0), re(0.0)])[2], re(1.0));
}

#[test]
fn rejects_wrong_entry_count() {
    assert!(LocalMap::<f64>::from_real(2, &[1.0, 0.0, 0.0]).is_err());
}

#[test]
fn projector_is_idempotent() {
    let h = 0.5f64.sqrt();
    let p = LocalMap::projector(&[re(h), re(h)]);
    let pp = p.compose(&p).unwrap();
    assert!(pp.max_abs_diff(&p) < 1e-15);
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
