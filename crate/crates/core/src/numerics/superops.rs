use super::{InteractionFrame, ModelSpec, TimeGrid};
use crate::linalg::{self, CMat};
use crate::terms::Sign;

/// `A^+(t_i)` and `A^-(t_i)` on every grid node, as matrices acting on
/// column-major vectorized operators.
#[derive(Clone, Debug)]
pub struct SystemSuperops {
    pub a_t: Vec<CMat>,
    pub plus: Vec<CMat>,
    pub minus: Vec<CMat>,
}

impl SystemSuperops {
    pub fn get(&self, sign: Sign, i: usize) -> &CMat {
        match sign {
            Sign::Plus => &self.plus[i],
            Sign::Minus => &self.minus[i],
        }
    }
}

pub fn build_system_superops(model: &ModelSpec, grid: &TimeGrid) -> SystemSuperops {
    let frame = InteractionFrame::new(model.h_s());
    let a_t: Vec<CMat> = grid
        .times()
        .iter()
        .map(|&t| frame.to_interaction(model.a(), t))
        .collect();
    let plus = a_t.iter().map(linalg::anticommutator).collect();
    let minus = a_t.iter().map(linalg::commutator).collect();
    SystemSuperops { a_t, plus, minus }
}
