//! The small benchmark instances with their fleet sizes.

use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub name: &'static str,
    /// Path relative to the data directory.
    pub file: &'static str,
    pub customers: usize,
    pub vehicles: usize,
}

const fn e(name: &'static str, file: &'static str, customers: usize, vehicles: usize) -> Entry {
    Entry {
        name,
        file,
        customers,
        vehicles,
    }
}

pub const FIVE: [Entry; 12] = [
    e("C101-5", "5/c101C5.txt", 5, 2),
    e("C103-5", "5/c103C5.txt", 5, 2),
    e("C206-5", "5/c206C5.txt", 5, 2),
    e("C208-5", "5/c208C5.txt", 5, 1),
    e("R104-5", "5/r104C5.txt", 5, 2),
    e("R105-5", "5/r105C5.txt", 5, 2),
    e("R202-5", "5/r202C5.txt", 5, 1),
    e("R203-5", "5/r203C5.txt", 5, 1),
    e("RC105-5", "5/rc105C5.txt", 5, 2),
    e("RC108-5", "5/rc108C5.txt", 5, 2),
    e("RC204-5", "5/rc204C5.txt", 5, 1),
    e("RC208-5", "5/rc208C5.txt", 5, 1),
];

pub const TEN: [Entry; 12] = [
    e("C101-10", "10/c101C10.txt", 10, 3),
    e("C104-10", "10/c104C10.txt", 10, 2),
    e("C202-10", "10/c202C10.txt", 10, 2),
    e("C205-10", "10/c205C10.txt", 10, 2),
    e("R102-10", "10/r102C10.txt", 10, 4),
    e("R103-10", "10/r103C10.txt", 10, 2),
    e("R201-10", "10/r201C10.txt", 10, 1),
    e("R203-10", "10/r203C10.txt", 10, 2),
    e("RC102-10", "10/rc102C10.txt", 10, 4),
    e("RC108-10", "10/rc108C10.txt", 10, 3),
    e("RC201-10", "10/rc201C10.txt", 10, 2),
    e("RC205-10", "10/rc205C10.txt", 10, 2),
];

pub const FIFTEEN: [Entry; 11] = [
    e("C103-15", "15/c103C15.txt", 15, 3),
    e("C106-15", "15/c106C15.txt", 15, 3),
    e("C202-15", "15/c202C15.txt", 15, 2),
    e("C208-15", "15/c208C15.txt", 15, 2),
    e("R102-15", "15/r102C15.txt", 15, 5),
    e("R105-15", "15/r105C15.txt", 15, 4),
    e("R202-15", "15/r202C15.txt", 15, 2),
    e("RC103-15", "15/rc103C15.txt", 15, 4),
    e("RC108-15", "15/rc108C15.txt", 15, 3),
    e("RC202-15", "15/rc202C15.txt", 15, 3),
    e("RC204-15", "15/rc204C15.txt", 15, 2),
];

pub fn all() -> impl Iterator<Item = &'static Entry> {
    FIVE.iter().chain(TEN.iter()).chain(FIFTEEN.iter())
}

/// Entry by display name (`C101-5`) or file stem (`c101C5`), ignoring case.
pub fn find(key: &str) -> Option<&'static Entry> {
    all().find(|e| e.name.eq_ignore_ascii_case(key) || stem(e.file).eq_ignore_ascii_case(key))
}

fn stem(file: &str) -> &str {
    let base = file.rsplit('/').next().unwrap_or(file);
    base.strip_suffix(".txt").unwrap_or(base)
}

/// `EVRPTW_DATA` if set, else the repository's vendored data.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("EVRPTW_DATA") {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/schneider")),
    }
}

impl Entry {
    pub fn path(&self) -> PathBuf {
        data_dir().join(self.file)
    }
}
