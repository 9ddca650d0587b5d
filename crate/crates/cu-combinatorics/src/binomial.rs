/// The coefficient of $t^b$ in the formal power series $(1+t)^a$ over
/// $\mathbb{F}_2$.
///
/// For $a \geq 0$ this is Lucas' theorem. For $a = -n < 0$ we use
/// $(1+t)^{-n} = \sum_b \binom{n+b-1}{b} t^b$ (up to sign, which vanishes
/// mod 2). The result is zero whenever $b < 0$.
pub fn binom_mod2(a: i64, b: i64) -> u8 {
    if b < 0 {
        return 0;
    }
    if a >= 0 {
        if b > a {
            return 0;
        }
        return (b & !a == 0) as u8;
    }
    let n = -a;
    let top = n + b - 1;
    (b & !top == 0) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Coefficients of $(1+t)^a$ by repeated multiplication, truncated at
    /// degree `len`. Negative powers use the inverse series
    /// $(1+t)^{-1} = 1 + t + t^2 + \cdots$.
    fn series(a: i64, len: usize) -> Vec<u8> {
        let mut out = vec![0u8; len];
        out[0] = 1;
        let factor: Vec<u8> = if a >= 0 {
            let mut f = vec![0u8; len];
            f[0] = 1;
            if len > 1 {
                f[1] = 1;
            }
            f
        } else {
            vec![1u8; len]
        };
        for _ in 0..a.unsigned_abs() {
            let mut next = vec![0u8; len];
            for (i, &x) in out.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in factor.iter().enumerate().take(len - i) {
                    next[i + j] ^= y;
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn spot_values() {
        assert_eq!(binom_mod2(4, 0), 1);
        assert_eq!(binom_mod2(-1, 7), 1);
        assert_eq!(binom_mod2(5, 2), 0);
        assert_eq!(binom_mod2(5, -1), 0);
        assert_eq!(binom_mod2(-2, 1), 0);
        assert_eq!(binom_mod2(-2, 2), 1);
    }

    #[test]
    fn agrees_with_series() {
        for a in -12..=12 {
            let s = series(a, 20);
            for b in 0..20 {
                assert_eq!(binom_mod2(a, b as i64), s[b], "a={a} b={b}");
            }
        }
    }
}
