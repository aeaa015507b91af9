use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};

/// Which ground node caches which file, with per-node fill counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CachingPolicy {
    num_gns: usize,
    num_files: usize,
    capacity: usize,
    placement: Vec<bool>,
    fill: Vec<usize>,
}

impl CachingPolicy {
    pub fn new(num_gns: usize, num_files: usize, capacity: usize) -> Self {
        Self { num_gns, num_files, capacity, placement: vec![false; num_gns * num_files], fill: vec![0; num_gns] }
    }

    /// Every node caches every file (capacity set to `num_files`).
    pub fn everything(num_gns: usize, num_files: usize) -> Self {
        let mut p = Self::new(num_gns, num_files, num_files);
        p.placement.fill(true);
        p.fill.fill(num_files);
        p
    }

    pub fn num_gns(&self) -> usize {
        self.num_gns
    }

    pub fn num_files(&self) -> usize {
        self.num_files
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn contains(&self, gn: usize, file: usize) -> bool {
        self.placement[gn * self.num_files + file]
    }

    pub fn fill(&self, gn: usize) -> usize {
        self.fill[gn]
    }

    pub fn is_full(&self, gn: usize) -> bool {
        self.fill[gn] >= self.capacity
    }

    /// Cache `file` at `gn`; fails if already cached or the node is full.
    pub fn insert(&mut self, gn: usize, file: usize) -> Result<()> {
        if self.contains(gn, file) {
            return Err(Error::Contract(format!("file {file} already cached at GN {gn}")));
        }
        if self.is_full(gn) {
            return Err(Error::Contract(format!("GN {gn} storage is full ({} files)", self.capacity)));
        }
        self.placement[gn * self.num_files + file] = true;
        self.fill[gn] += 1;
        Ok(())
    }

    pub fn remove(&mut self, gn: usize, file: usize) {
        if self.contains(gn, file) {
            self.placement[gn * self.num_files + file] = false;
            self.fill[gn] -= 1;
        }
    }

    /// Nodes holding `file`.
    pub fn holders(&self, file: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_gns).filter(move |&k| self.contains(k, file))
    }

    /// Files cached at `gn`.
    pub fn files_at(&self, gn: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_files).filter(move |&n| self.contains(gn, n))
    }

    /// Nodes caching at least one file, ascending.
    pub fn caching_gns(&self) -> Vec<usize> {
        (0..self.num_gns).filter(|&k| self.fill[k] > 0).collect()
    }

    /// Selected (GN, file) pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_gns).flat_map(move |k| self.files_at(k).map(move |n| (k, n)))
    }

    pub fn len(&self) -> usize {
        self.fill.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Files nobody caches.
    pub fn uncached_files(&self) -> Vec<usize> {
        (0..self.num_files).filter(|&n| self.holders(n).next().is_none()).collect()
    }

    pub fn covers_all_files(&self) -> bool {
        self.uncached_files().is_empty()
    }

    /// Number of caching copies of each file.
    pub fn repetition_stats(&self) -> Vec<usize> {
        (0..self.num_files).map(|n| self.holders(n).count()).collect()
    }

    /// One row per GN, one 0/1 column per file, no header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        for k in 0..self.num_gns {
            w.write_record((0..self.num_files).map(|n| if self.contains(k, n) { "1" } else { "0" }))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R, capacity: usize) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
        let mut rows: Vec<Vec<bool>> = Vec::new();
        for (k, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|f| match f.trim() {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(Error::Contract(format!("row {k}: expected 0 or 1, got {other:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let num_files = rows.first().map_or(0, Vec::len);
        let mut p = Self::new(rows.len(), num_files, capacity);
        for (k, row) in rows.iter().enumerate() {
            if row.len() != num_files {
                return Err(Error::Contract(format!("row {k} has {} columns, expected {num_files}", row.len())));
            }
            for (n, &on) in row.iter().enumerate() {
                if on {
                    p.insert(k, n)?;
                }
            }
        }
        Ok(p)
    }
}
