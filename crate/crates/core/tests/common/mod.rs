#![allow(dead_code)]

use std::path::PathBuf;

/// Golden file name and command line for every built-in example.
pub const GOLDEN: &[(&str, &str)] = &[
    ("examples.txt", "examples"),
    ("lines_p2_2.txt", "mv --example lines-p2 --n 2"),
    ("lines_p2_4.txt", "mv --example lines-p2 --n 4"),
    ("lines_p2_8.json", "mv --example lines-p2 --n 8 --format json"),
    ("quadric_p3.txt", "mv --example quadric-p3"),
    ("quadric_p3.json", "mv --example quadric-p3 --format json"),
    ("quadric_p3_cubical.txt", "cubical-mv --example quadric-p3"),
    ("braid_3.txt", "mv --example braid --n 3"),
    ("braid_4.json", "mv --example braid --n 4 --format json"),
    ("boolean_3.txt", "mv --example boolean --n 3"),
    ("boolean_3_cubical.txt", "cubical-mv --example boolean --n 3"),
    ("chromatic_k3_p1.txt", "chromatic --graph k3 --space p1"),
    ("chromatic_c4_p2.txt", "chromatic --graph c4 --space p2"),
    ("chromatic_path3_elliptic.json", "chromatic --graph path3 --space elliptic --format json"),
    ("subspace_braid_4.txt", "subspace --example braid --n 4"),
    ("os_braid_4.txt", "os-algebra --example braid --n 4"),
    ("os_boolean_4.json", "os-algebra --example boolean --n 4 --format json"),
    ("mobius_trivial.txt", "verify-mobius --example trivial"),
    ("mobius_truncation.txt", "verify-mobius --example truncation"),
    ("mobius_ideal_square.txt", "verify-mobius --example ideal-square"),
    ("mobius_augmented_cube.json", "verify-mobius --example augmented-cube --format json"),
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn args(line: &str) -> Vec<String> {
    std::iter::once("arrkit".to_string()).chain(line.split_whitespace().map(String::from)).collect()
}
