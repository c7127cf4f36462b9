use crate::hash::HashParams;
use crate::tau::{BitMatrix, TauInstance};

fn h(a: u64, b: u64, p: u64, t: u64) -> HashParams {
    HashParams::from_u64(a, b, p, t).unwrap()
}

fn hand_parts() -> (Vec<HashParams>, Vec<HashParams>, Vec<Vec<HashParams>>) {
    (
        vec![h(3, 2, 5, 2), h(4, 3, 7, 2)],
        vec![h(2, 1, 7, 2), h(5, 2, 11, 2)],
        vec![
            vec![h(3, 1, 11, 8), h(5, 3, 13, 8)],
            vec![h(2, 5, 17, 8), h(7, 4, 19, 8)],
        ],
    )
}

/// n = 2 instance with outputs 1, 3, 1, 2 for inputs 0..4.
pub fn hand_instance() -> TauInstance {
    let (h_row, h_col, h_m) = hand_parts();
    let m1 = BitMatrix::from_bits(&[vec![1, 0], vec![0, 1]]).unwrap();
    let m2 = BitMatrix::from_bits(&[vec![0, 0], vec![1, 1]]).unwrap();
    TauInstance::from_parts(2, 5, None, vec![m1, m2], h_row, h_col, h_m).unwrap()
}

/// Hand instance with matrix `bit` (1-based) replaced by all ones.
pub fn instance_with_all_ones_matrix(bit: usize) -> TauInstance {
    let (h_row, h_col, h_m) = hand_parts();
    let mut ms = vec![
        BitMatrix::from_bits(&[vec![1, 0], vec![0, 1]]).unwrap(),
        BitMatrix::from_bits(&[vec![0, 0], vec![1, 1]]).unwrap(),
    ];
    ms[bit - 1] = BitMatrix::from_bits(&[vec![1, 1], vec![1, 1]]).unwrap();
    TauInstance::from_parts(2, 5, None, ms, h_row, h_col, h_m).unwrap()
}
