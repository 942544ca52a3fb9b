/// `(1 + e^{20x})^{-1}`: the steep decreasing sigmoid used by the
/// structural-equation simulator and the selection-biasing procedure.
pub fn sigmoid_steep(x: f64) -> f64 {
    decreasing_sigmoid(20.0 * x)
}

/// `1 / (1 + e^x)`: the decreasing sigmoid of the running univariate example.
pub fn sigmoid_ex1(x: f64) -> f64 {
    decreasing_sigmoid(x)
}

/// Standard logistic link `1 / (1 + e^{-x})`.
pub fn logistic(x: f64) -> f64 {
    decreasing_sigmoid(-x)
}

fn decreasing_sigmoid(t: f64) -> f64 {
    if t > 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn steep_values() {
        assert_eq!(sigmoid_steep(0.0), 0.5);
        let expected = 1.0 / (1.0 + 2f64.exp());
        assert!((sigmoid_steep(0.1) - expected).abs() < 1e-15);
        assert!((sigmoid_steep(0.1) - 0.1192).abs() < 1e-4);
        assert!((sigmoid_steep(-10.0) - 1.0).abs() < 1e-12);
        assert!(sigmoid_steep(1e6).is_finite());
        assert!(sigmoid_steep(-1e6).is_finite());
    }

    #[test]
    fn ex1_values() {
        assert_eq!(sigmoid_ex1(0.0), 0.5);
        assert!(sigmoid_ex1(50.0) < 1e-20);
        assert!((sigmoid_ex1(3f64.ln()) - 0.25).abs() < 1e-15);
        assert!((logistic(3f64.ln()) - 0.75).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn steep_is_symmetric(x in -5.0f64..5.0) {
            prop_assert!((sigmoid_steep(x) + sigmoid_steep(-x) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn ex1_is_decreasing(x in -30.0f64..30.0, dx in 1e-3f64..5.0) {
            prop_assert!(sigmoid_ex1(x + dx) < sigmoid_ex1(x));
        }
    }
}
