//! Mobius function table via a linear sieve.

use crate::error::{Error, Result};

/// mu(1..=limit) as i8 values in {-1, 0, +1}.
#[derive(Debug, Clone)]
pub struct MobiusTable {
    values: Vec<i8>,
}

impl MobiusTable {
    /// Linear sieve: O(limit) time, each composite crossed once by its
    /// smallest prime factor.
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 1 {
            return Err(Error::domain("mobius_table", "limit must be at least 1"));
        }
        let n = limit as usize;
        let mut mu = vec![0i8; n + 1];
        mu[1] = 1;
        let mut primes: Vec<usize> = Vec::new();
        let mut is_comp = vec![false; n + 1];
        for i in 2..=n {
            if !is_comp[i] {
                primes.push(i);
                mu[i] = -1;
            }
            for &p in &primes {
                let ip = i * p;
                if ip > n {
                    break;
                }
                is_comp[ip] = true;
                if i % p == 0 {
                    mu[ip] = 0;
                    break;
                }
                mu[ip] = -mu[i];
            }
        }
        Ok(MobiusTable { values: mu })
    }

    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// mu(n); panics when n is 0 or beyond the table.
    pub fn mu(&self, n: u64) -> i8 {
        self.values[n as usize]
    }

    /// Ascending squarefree n in [2, limit] with their mu sign.
    pub fn squarefree(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        self.values
            .iter()
            .enumerate()
            .skip(2)
            .filter(|(_, &m)| m != 0)
            .map(|(n, &m)| (n as u64, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let t = MobiusTable::build(30).unwrap();
        assert_eq!(t.mu(1), 1);
        assert_eq!(t.mu(2), -1);
        assert_eq!(t.mu(6), 1);
        assert_eq!(t.mu(12), 0);
        assert_eq!(t.mu(30), -1);
    }

    #[test]
    fn convolution_identity_at_30() {
        // sum_{d | 30} mu(d) = 0 since 30 != 1
        let t = MobiusTable::build(30).unwrap();
        let s: i64 = (1..=30).filter(|d| 30 % d == 0).map(|d| t.mu(d) as i64).sum();
        assert_eq!(s, 0);
    }

    #[test]
    fn zero_iff_squared_factor() {
        let t = MobiusTable::build(1000).unwrap();
        for n in 1..=1000u64 {
            let has_square = (2..=31u64).any(|p| n % (p * p) == 0);
            assert_eq!(t.mu(n) == 0, has_square, "n={n}");
        }
    }
}
