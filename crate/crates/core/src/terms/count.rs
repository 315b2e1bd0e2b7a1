use super::generate::generator_terms;
use super::term::Kind;
use super::vankampen::vankampen_terms;
use crate::error::Result;

/// How terms of a generator order are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// Distinct clusterings of the recursive form, signs erased (one term per
    /// product of averages of `V^-`).
    RecursiveV,
    /// Fully sign-resolved recursive terms.
    RecursivePm,
    /// Tabulated ordered-cumulant terms.
    VanKampen,
}

pub fn count_terms(n: usize, method: CountMethod) -> Result<usize> {
    match method {
        CountMethod::RecursiveV => Ok(generator_terms(n, Kind::Schrodinger)?.clusterings().len()),
        CountMethod::RecursivePm => Ok(generator_terms(n, Kind::Schrodinger)?.len()),
        CountMethod::VanKampen => Ok(vankampen_terms(n)?.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_counts() {
        assert_eq!(count_terms(3, CountMethod::RecursiveV).unwrap(), 4);
        assert_eq!(count_terms(3, CountMethod::VanKampen).unwrap(), 6);
        assert_eq!(count_terms(4, CountMethod::RecursiveV).unwrap(), 8);
        assert_eq!(count_terms(4, CountMethod::VanKampen).unwrap(), 20);
        assert_eq!(count_terms(3, CountMethod::RecursivePm).unwrap(), 9);
    }

    #[test]
    fn closed_forms() {
        for n in 1..=8 {
            assert_eq!(
                count_terms(n, CountMethod::RecursiveV).unwrap(),
                1 << (n - 1)
            );
            assert_eq!(
                count_terms(n, CountMethod::RecursivePm).unwrap(),
                3usize.pow(n as u32 - 1)
            );
        }
    }

    #[test]
    fn vankampen_range_error_propagates() {
        assert!(count_terms(5, CountMethod::VanKampen).is_err());
    }
}
