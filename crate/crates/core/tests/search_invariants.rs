//! Bulk agreement between the mask-based singular-line test, the
//! generic contraction route, and the kernel/decomposable route, on
//! 10^4 random forms per configuration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use lincomplex::complexes::LinearComplex;
use lincomplex::exterior::AlternatingForm;
use lincomplex::gf::Field;
use lincomplex::search::{has_singular_line_oracle, SingularLineScan};

fn random_forms(q: u8, n: u8, count: usize, seed: u64) -> Vec<AlternatingForm> {
    let field = Field::shared(q).unwrap();
    let dim = {
        let n1 = n as usize + 1;
        n1 * (n1 - 1) * (n1 - 2) / 6
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let coeffs: Vec<u8> = (0..dim).map(|_| rng.random_range(0..q)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        out.push(
            AlternatingForm::new(&field, n, 3, coeffs)
                .unwrap()
                .normalize(),
        );
    }
    out
}

fn agreement(q: u8, n: u8, count: usize, seed: u64) {
    let field = Field::shared(q).unwrap();
    let scan = SingularLineScan::new(&field, n).unwrap();
    let forms = random_forms(q, n, count, seed);
    let disagreements: Vec<String> = forms
        .par_iter()
        .enumerate()
        .filter_map(|(i, form)| {
            let fast = scan.has_singular_line(form);
            let kernel_route = LinearComplex::new(form.clone())
                .unwrap()
                .has_singular()
                .unwrap();
            if fast != kernel_route {
                return Some(format!("#{i}: fast={fast}, kernel route={kernel_route}"));
            }
            // the generic contraction route on a sparser stride
            if i % 101 == 0 {
                let oracle = has_singular_line_oracle(form).unwrap();
                if fast != oracle {
                    return Some(format!("#{i}: fast={fast}, contraction oracle={oracle}"));
                }
            }
            None
        })
        .collect();
    assert!(
        disagreements.is_empty(),
        "(n={n}, q={q}): {:?}",
        &disagreements[..3.min(disagreements.len())]
    );
}

#[test]
fn fast_equals_slow_pg42() {
    agreement(2, 4, 10_000, 42);
}

#[test]
fn fast_equals_slow_pg52() {
    agreement(2, 5, 10_000, 52);
}

#[test]
fn fast_equals_slow_pg62() {
    agreement(2, 6, 10_000, 62);
}

#[test]
fn fast_equals_slow_pg53() {
    agreement(3, 5, 10_000, 53);
}
