use rand::Rng;

use crate::error::{check_dims, Error, Result};
use crate::sharing::euclidean;
use crate::types::{DecisionVector, Individual, ParameterSpace};

/// Digits per decision variable.
pub const DIGITS_PER_PARAM: usize = 3;
const MAX_CODE: f64 = 999.0;

/// Decimal chromosome, three digits per parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    digits: Vec<u8>,
}

impl Chromosome {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if !digits.len().is_multiple_of(DIGITS_PER_PARAM) {
            return Err(Error::InvalidChromosome(format!(
                "length {} is not a multiple of {DIGITS_PER_PARAM}",
                digits.len()
            )));
        }
        if let Some(d) = digits.iter().find(|&&d| d > 9) {
            return Err(Error::InvalidChromosome(format!("digit {d} out of range")));
        }
        Ok(Self { digits })
    }

    /// All-zero chromosome for `n` parameters.
    pub fn zeros(n: usize) -> Self {
        Self {
            digits: vec![0; n * DIGITS_PER_PARAM],
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            digits: (0..n * DIGITS_PER_PARAM)
                .map(|_| rng.random_range(0..10u8))
                .collect(),
        }
    }

    /// Digit groups for the given 3-digit codes (each 0..=999).
    pub fn from_codes(codes: &[u16]) -> Result<Self> {
        let mut digits = Vec::with_capacity(codes.len() * DIGITS_PER_PARAM);
        for &c in codes {
            if c > 999 {
                return Err(Error::InvalidChromosome(format!("code {c} exceeds 999")));
            }
            digits.extend([(c / 100) as u8, (c / 10 % 10) as u8, (c % 10) as u8]);
        }
        Ok(Self { digits })
    }

    /// Nearest chromosome for a decision vector.
    pub fn encode(x: &DecisionVector, space: &ParameterSpace) -> Result<Self> {
        check_dims(space.len(), x.len())?;
        let codes: Vec<u16> = x
            .iter()
            .zip(space.bounds())
            .map(|(&v, &(lo, hi))| {
                ((v - lo) / (hi - lo) * MAX_CODE)
                    .round()
                    .clamp(0.0, MAX_CODE) as u16
            })
            .collect();
        Self::from_codes(&codes)
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn codes(&self) -> impl Iterator<Item = u16> + '_ {
        self.digits
            .chunks(DIGITS_PER_PARAM)
            .map(|c| c[0] as u16 * 100 + c[1] as u16 * 10 + c[2] as u16)
    }
}

impl std::fmt::Display for Chromosome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Linear map of each 3-digit code onto `[lo, hi]`; 999 maps to `hi`.
pub fn decode(ch: &Chromosome, space: &ParameterSpace) -> Result<DecisionVector> {
    check_dims(space.len() * DIGITS_PER_PARAM, ch.len())?;
    Ok(DecisionVector::new(
        ch.codes()
            .zip(space.bounds())
            .map(|(code, &(lo, hi))| lo + (hi - lo) * code as f64 / MAX_CODE)
            .collect(),
    ))
}

/// Index of the tournament winner among `k` members drawn with replacement:
/// lowest rank, then lowest niche count, then uniformly at random.
pub fn tournament_select<R: Rng + ?Sized>(pop: &[Individual], k: usize, rng: &mut R) -> usize {
    debug_assert!(!pop.is_empty());
    let mut best: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..k.max(1) {
        let c = rng.random_range(0..pop.len());
        match best.first() {
            None => best.push(c),
            Some(&b) => {
                let (cr, cn) = (pop[c].rank, pop[c].niche_count);
                let (br, bn) = (pop[b].rank, pop[b].niche_count);
                if (cr, cn) == (br, bn) {
                    best.push(c);
                } else if cr < br || (cr == br && cn < bn) {
                    best.clear();
                    best.push(c);
                }
            }
        }
    }
    if best.len() == 1 {
        best[0]
    } else {
        best[rng.random_range(0..best.len())]
    }
}

/// Swap the digits in `[lo, hi)` between the two parents.
pub fn swap_segment(
    a: &Chromosome,
    b: &Chromosome,
    lo: usize,
    hi: usize,
) -> (Chromosome, Chromosome) {
    let mut x = a.clone();
    let mut y = b.clone();
    x.digits[lo..hi].copy_from_slice(&b.digits[lo..hi]);
    y.digits[lo..hi].copy_from_slice(&a.digits[lo..hi]);
    (x, y)
}

/// Two-point crossover applied with probability `p_crossover`.
pub fn crossover_two_point<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    p_crossover: f64,
    rng: &mut R,
) -> Result<(Chromosome, Chromosome)> {
    check_dims(a.len(), b.len())?;
    if a.len() < 2 || !rng.random_bool(p_crossover) {
        return Ok((a.clone(), b.clone()));
    }
    let c1 = rng.random_range(0..=a.len());
    let mut c2 = rng.random_range(0..a.len());
    if c2 >= c1 {
        c2 += 1;
    }
    let (lo, hi) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
    Ok(swap_segment(a, b, lo, hi))
}

/// Mate for `first`: uniformly among the other candidates closer than
/// `mate_sigma` in objective space, or any other candidate when none is.
pub fn choose_mate<R: Rng + ?Sized>(
    first: usize,
    points: &[Vec<f64>],
    mate_sigma: Option<f64>,
    rng: &mut R,
) -> usize {
    let n = points.len();
    if n < 2 {
        return first;
    }
    if let Some(sigma) = mate_sigma {
        let near: Vec<usize> = (0..n)
            .filter(|&j| {
                let d = euclidean(&points[first], &points[j]);
                d > 0.0 && d < sigma
            })
            .collect();
        if !near.is_empty() {
            return near[rng.random_range(0..near.len())];
        }
    }
    let j = rng.random_range(0..n - 1);
    if j >= first {
        j + 1
    } else {
        j
    }
}

/// Replace each digit with a uniform random digit with probability `p`.
pub fn mutate<R: Rng + ?Sized>(ch: &Chromosome, p: f64, rng: &mut R) -> Chromosome {
    let digits = ch
        .digits
        .iter()
        .map(|&d| {
            if rng.random_bool(p) {
                rng.random_range(0..10u8)
            } else {
                d
            }
        })
        .collect();
    Chromosome { digits }
}
