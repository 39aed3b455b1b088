//! Fixed inputs shared by the benchmarks.

use majlab_core::gen::{random_hermitian, random_psd_pair, GeneratorKind, GeneratorSpec};
use majlab_core::{HermitianMatrix, PsdMatrix};

pub const DIMS: [usize; 4] = [4, 8, 16, 32];

pub fn hermitian(n: usize) -> HermitianMatrix {
    random_hermitian(&GeneratorSpec::new(GeneratorKind::HermitianGue, n, 0xBE7C))
        .expect("valid spec")
}

pub fn psd_pair(n: usize) -> (PsdMatrix, PsdMatrix) {
    random_psd_pair(GeneratorKind::GinibrePsd, n, 1.0, 0xBE7C).expect("valid spec")
}
