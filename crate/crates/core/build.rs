//! Generates the Bernoulli number table used by the polygamma asymptotic series.
//!
//! B_0..B_40 are computed exactly from the recurrence
//! sum_{j=0}^{k} C(k+1, j) B_j = 0 and rounded once to binary64.

use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

const MAX_INDEX: usize = 40;

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn main() {
    let mut b: Vec<BigRational> = Vec::with_capacity(MAX_INDEX + 1);
    b.push(BigRational::one());
    for k in 1..=MAX_INDEX {
        let mut sum = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            sum += BigRational::from_integer(binomial(k + 1, j)) * bj;
        }
        b.push(-sum / BigRational::from_integer(BigInt::from(k + 1)));
    }

    let mut out = String::new();
    writeln!(out, "/// Even-index Bernoulli numbers B_2, B_4, ..., B_{MAX_INDEX}.").unwrap();
    writeln!(out, "pub(crate) const BERNOULLI_EVEN: [f64; {}] = [", MAX_INDEX / 2).unwrap();
    for k in (2..=MAX_INDEX).step_by(2) {
        let v = b[k].to_f64().expect("finite Bernoulli number");
        writeln!(out, "    {v:e}, // B_{k} = {}", b[k]).unwrap();
    }
    writeln!(out, "];").unwrap();

    let dest = Path::new(&env::var("OUT_DIR").unwrap()).join("bernoulli.rs");
    fs::write(dest, out).unwrap();
    println!("cargo:rerun-if-changed=build.rs");
}
