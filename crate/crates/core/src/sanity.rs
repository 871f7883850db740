//! Frequency (monobit) and runs tests as finite-sample sanity checks on
//! extractor output. Significance level defaults to 0.01.

use statrs::function::erf::erfc;

use crate::bits::BitVector;

pub const DEFAULT_ALPHA: f64 = 0.01;

/// Inputs shorter than this are accepted with a warning.
pub const RECOMMENDED_MIN_BITS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
}

impl TestOutcome {
    pub fn passed(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// Frequency test: `p = erfc(|S_n| / sqrt(2n))` with `S_n = Σ (2ε_i - 1)`.
pub fn monobit(bits: &BitVector) -> TestOutcome {
    let n = bits.len();
    if n == 0 {
        return TestOutcome {
            statistic: 0.0,
            p_value: 0.0,
        };
    }
    let ones = bits.count_ones() as f64;
    let sum = 2.0 * ones - n as f64;
    let s_obs = sum.abs() / (n as f64).sqrt();
    TestOutcome {
        statistic: s_obs,
        p_value: erfc(s_obs / std::f64::consts::SQRT_2),
    }
}

/// Runs test. When the ones fraction fails the frequency prerequisite
/// `|π - 1/2| < 2/sqrt(n)` the test is not applicable and reports `p = 0`.
pub fn runs(bits: &BitVector) -> TestOutcome {
    let n = bits.len();
    if n < 2 {
        return TestOutcome {
            statistic: 0.0,
            p_value: 0.0,
        };
    }
    let nf = n as f64;
    let pi = bits.count_ones() as f64 / nf;
    if (pi - 0.5).abs() >= 2.0 / nf.sqrt() {
        return TestOutcome {
            statistic: 0.0,
            p_value: 0.0,
        };
    }
    // bit i differs from bit i+1 exactly where (v ^ (v >> 1)) is set
    let shifted = bits.range(1, n - 1).expect("n >= 2");
    let head = bits.range(0, n - 1).expect("n >= 2");
    let transitions = head.xor(&shifted).expect("same length").count_ones();
    let v_obs = (transitions + 1) as f64;
    let spread = 2.0 * pi * (1.0 - pi);
    let p_value = erfc((v_obs - nf * spread).abs() / (2.0 * (2.0 * nf).sqrt() * pi * (1.0 - pi)));
    TestOutcome {
        statistic: v_obs,
        p_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_ascii(s: &str) -> BitVector {
        s.bytes().map(|b| b == b'1').collect()
    }

    fn six(v: f64) -> f64 {
        (v * 1e6).round() / 1e6
    }

    const EPSILON_100: &str = "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";

    #[test]
    fn monobit_reference_values() {
        assert_eq!(six(monobit(&from_ascii("1011010101")).p_value), 0.527089);
        assert_eq!(six(monobit(&from_ascii(EPSILON_100)).p_value), 0.109599);
    }

    #[test]
    fn runs_reference_values() {
        let r = runs(&from_ascii("1001101011"));
        assert_eq!(r.statistic, 7.0);
        assert_eq!(six(r.p_value), 0.147232);
        assert_eq!(six(runs(&from_ascii(EPSILON_100)).p_value), 0.500798);
    }

    #[test]
    fn degenerate_inputs_fail() {
        let zeros = BitVector::zeros(10_000);
        assert!(monobit(&zeros).p_value < 1e-10);
        assert!(!monobit(&zeros).passed(DEFAULT_ALPHA));
        assert!(!runs(&zeros).passed(DEFAULT_ALPHA));
        let alternating: BitVector = (0..10_000).map(|i| i % 2 == 1).collect();
        assert!(monobit(&alternating).passed(DEFAULT_ALPHA));
        let r = runs(&alternating);
        assert_eq!(r.statistic, 10_000.0);
        assert!(!r.passed(DEFAULT_ALPHA));
    }
}
