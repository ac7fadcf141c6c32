//! Named inputs shared by the tests, the acceptance suite and the CLI.
//! Every fixture is prime-independent; build it at a prime and precision.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zlin::IntMatrix;

use crate::error::CycloError;
use crate::fdm::SplitFdm;

/// Number of random members of the standard corpus.
pub const RANDOM_CORPUS_SIZE: u64 = 20;

fn diag(entries: &[i64]) -> IntMatrix {
    IntMatrix::from_fn(entries.len(), entries.len(), |r, c| if r == c { entries[r].into() } else { 0.into() })
}

fn scalar_fdm(name: &str, weight: i64) -> SplitFdm {
    SplitFdm {
        name: name.into(),
        w0: vec![weight],
        w1: vec![],
        d1: IntMatrix::zeros(1, 0),
        d0: IntMatrix::zeros(0, 1),
        frob0: diag(&[1]),
        frob1: IntMatrix::zeros(0, 0),
        basis0: diag(&[1]),
        basis1: IntMatrix::zeros(0, 0),
    }
}

/// `ℤ` with the trivial filtration and Frobenius the identity.
pub fn trivial() -> SplitFdm {
    scalar_fdm("trivial", 0)
}

/// `ℤ(1)`: `F^1` is everything and `φ_1 = 1`, so `φ_0 = p`.
pub fn tate_twist() -> SplitFdm {
    scalar_fdm("tate_twist", 1)
}

pub fn zero() -> SplitFdm {
    SplitFdm {
        name: "zero".into(),
        w0: vec![],
        w1: vec![],
        d1: IntMatrix::zeros(0, 0),
        d0: IntMatrix::zeros(0, 0),
        frob0: IntMatrix::zeros(0, 0),
        frob1: IntMatrix::zeros(0, 0),
        basis0: IntMatrix::zeros(0, 0),
        basis1: IntMatrix::zeros(0, 0),
    }
}

enum Piece {
    /// Rank one in `V_0`.
    Even(i64, i64),
    /// Rank one in `V_1`.
    Odd(i64, i64),
    /// `V_1 --q--> V_0`, equal weights.
    Down(i64, i64, i64),
    /// `V_0 --q--> V_1(1)`, with `V_1` one weight lower.
    Up(i64, i64, i64),
}

/// Random filtered elementary change of basis on split weights.
fn random_basis(rng: &mut ChaCha8Rng, weights: &[i64]) -> IntMatrix {
    let n = weights.len();
    let mut b = IntMatrix::identity(n);
    if n == 2 {
        let (hi, lo) = if weights[0] >= weights[1] { (0, 1) } else { (1, 0) };
        // e_lo may pick up multiples of e_hi without leaving its filtration level.
        b.set(hi, lo, rng.gen_range(-2i64..=2));
        if weights[0] == weights[1] && rng.gen_bool(0.5) {
            let x: i64 = rng.gen_range(-1..=1);
            let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, x]]);
            b = &swap * &b;
        }
    }
    b
}

/// A random valid fixture of total rank at most two.
pub fn random(seed: u64) -> SplitFdm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = |rng: &mut ChaCha8Rng| rng.gen_range(-1i64..=2);
    let unit = |rng: &mut ChaCha8Rng| *[1i64, -1, 2, 3, -3].choose(rng).unwrap();
    let factor = |rng: &mut ChaCha8Rng| *[1i64, 2, 3, 4, 5, 6, -2].choose(rng).unwrap();
    let pieces = match rng.gen_range(0..4) {
        0 => vec![Piece::Down(weight(&mut rng), factor(&mut rng), unit(&mut rng))],
        1 => vec![Piece::Up(weight(&mut rng), factor(&mut rng), unit(&mut rng))],
        2 => {
            let n = rng.gen_range(1..=2);
            (0..n)
                .map(|_| if rng.gen_bool(0.6) { Piece::Even(weight(&mut rng), unit(&mut rng)) } else { Piece::Odd(weight(&mut rng), unit(&mut rng)) })
                .collect()
        }
        _ => vec![Piece::Even(weight(&mut rng), unit(&mut rng)), Piece::Even(weight(&mut rng), unit(&mut rng))],
    };
    let (mut w0, mut w1, mut f0, mut f1) = (vec![], vec![], vec![], vec![]);
    let mut down = vec![];
    let mut up = vec![];
    for piece in &pieces {
        match *piece {
            Piece::Even(w, c) => {
                w0.push(w);
                f0.push(c);
            }
            Piece::Odd(w, c) => {
                w1.push(w);
                f1.push(c);
            }
            Piece::Down(w, q, c) => {
                down.push((w0.len(), w1.len(), q));
                w0.push(w);
                w1.push(w);
                f0.push(c);
                f1.push(c);
            }
            Piece::Up(w, q, c) => {
                up.push((w1.len(), w0.len(), q));
                w0.push(w);
                w1.push(w - 1);
                f0.push(c);
                f1.push(c);
            }
        }
    }
    let mut d1 = IntMatrix::zeros(w0.len(), w1.len());
    for (r, c, q) in down {
        d1.set(r, c, q);
    }
    let mut d0 = IntMatrix::zeros(w1.len(), w0.len());
    for (r, c, q) in up {
        d0.set(r, c, q);
    }
    let basis0 = random_basis(&mut rng, &w0);
    let basis1 = random_basis(&mut rng, &w1);
    SplitFdm { name: format!("random_{seed}"), d1, d0, frob0: diag(&f0), frob1: diag(&f1), basis0, basis1, w0, w1 }
}

/// Trivial, Tate twist, then the seeded random members.
pub fn corpus() -> Vec<SplitFdm> {
    let mut out = vec![trivial(), tate_twist()];
    out.extend((0..RANDOM_CORPUS_SIZE).map(random));
    out
}

pub fn by_name(name: &str) -> Result<SplitFdm, CycloError> {
    match name {
        "trivial" => Ok(trivial()),
        "tate_twist" | "tate" => Ok(tate_twist()),
        "zero" => Ok(zero()),
        _ => name
            .strip_prefix("random_")
            .and_then(|s| s.parse().ok())
            .map(random)
            .ok_or_else(|| CycloError::Input(format!("unknown fixture {name:?}; expected trivial, tate_twist, zero or random_<seed>"))),
    }
}
