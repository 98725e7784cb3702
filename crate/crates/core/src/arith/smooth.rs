use super::sieve::PrimeTable;
use crate::error::{Error, Result};

/// Largest `bound` accepted by [`enumerate_smooth`]; the output is materialised and sorted.
pub const MAX_SMOOTH_BOUND: u64 = 100_000_000;

/// Walk every integer `n ≤ bound` whose prime factors all lie in `primes`
/// (sorted ascending), including `n = 1`.
///
/// Integers are built by recursive prime-power extension, so the cost is
/// proportional to the number of integers produced, not to `bound`. For each
/// one, `visit(n, weight, omega)` receives the product of
/// `weight(prime_index, exponent)` over its prime powers and `Ω(n)`.
pub fn for_each_composed<W, V>(primes: &[u64], bound: u64, weight: W, mut visit: V)
where
    W: Fn(usize, u32) -> f64,
    V: FnMut(u64, f64, u32),
{
    if bound == 0 {
        return;
    }
    extend(primes, 0, 1, 1.0, 0, bound, &weight, &mut visit);
}

#[allow(clippy::too_many_arguments)]
fn extend<W, V>(
    primes: &[u64],
    start: usize,
    n: u64,
    w: f64,
    omega: u32,
    bound: u64,
    weight: &W,
    visit: &mut V,
) where
    W: Fn(usize, u32) -> f64,
    V: FnMut(u64, f64, u32),
{
    visit(n, w, omega);
    for (i, &p) in primes.iter().enumerate().skip(start) {
        if n > bound / p {
            break;
        }
        let mut m = n * p;
        let mut e = 1;
        loop {
            extend(primes, i + 1, m, w * weight(i, e), omega + e, bound, weight, visit);
            if m > bound / p {
                break;
            }
            m *= p;
            e += 1;
        }
    }
}

/// All `n ≤ bound` with `P(n) ≤ y`, in increasing order.
pub fn enumerate_smooth(bound: u64, y: f64, table: &PrimeTable) -> Result<impl Iterator<Item = u64>> {
    if bound > MAX_SMOOTH_BOUND {
        return Err(Error::Config(format!(
            "smooth enumeration bound {bound} exceeds {MAX_SMOOTH_BOUND}"
        )));
    }
    let reach = y.min(bound as f64);
    table.check_covers(reach, "smoothness level")?;
    let primes = table.primes_in(1.0, reach);
    let mut out = Vec::new();
    for_each_composed(primes, bound, |_, _| 1.0, |n, _, _| out.push(n));
    out.sort_unstable();
    Ok(out.into_iter())
}
