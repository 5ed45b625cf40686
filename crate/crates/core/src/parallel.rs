//! Contiguous-range sharding over a worker pool.
//!
//! The shard layout depends only on the size of the search space, never on
//! the number of workers, and results come back in shard order. Worker count
//! therefore cannot change any output.

use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::Result;
use crate::gf::FieldCtx;

const MAX_SHARDS: u64 = 64;

pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn shard_count(total: u64) -> usize {
    total.clamp(1, MAX_SHARDS) as usize
}

pub fn shard_ranges(total: u64, shards: usize) -> Vec<Range<u64>> {
    let s = shards as u128;
    (0..s)
        .map(|i| {
            let lo = (total as u128 * i / s) as u64;
            let hi = (total as u128 * (i + 1) / s) as u64;
            lo..hi
        })
        .collect()
}

/// Runs `work` over every shard of `0..total` on `jobs` threads. Each thread
/// gets its own copy of the field. Results are in shard order; the error of
/// the lowest failing shard wins.
pub fn run_sharded<T, F>(ctx: &FieldCtx, total: u64, jobs: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&FieldCtx, Range<u64>) -> Result<T> + Sync,
{
    let ranges = shard_ranges(total, shard_count(total));
    let slots: Vec<Mutex<Option<Result<T>>>> = ranges.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let jobs = jobs.clamp(1, ranges.len());
    if jobs == 1 {
        for (slot, r) in slots.iter().zip(&ranges) {
            *slot.lock().unwrap() = Some(work(ctx, r.clone()));
        }
    } else {
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| {
                    let local = ctx.detach();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(r) = ranges.get(i) else { break };
                        let out = work(&local, r.clone());
                        *slots[i].lock().unwrap() = Some(out);
                    }
                });
            }
        });
    }
    slots.into_iter().map(|s| s.into_inner().unwrap().expect("every shard ran")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_partition_the_space() {
        for total in [0u64, 1, 5, 64, 65, 1000, 1 << 20] {
            for shards in [1usize, 2, 7, 64] {
                let r = shard_ranges(total, shards);
                assert_eq!(r.len(), shards);
                assert_eq!(r[0].start, 0);
                assert_eq!(r.last().unwrap().end, total);
                assert!(r.windows(2).all(|w| w[0].end == w[1].start));
            }
        }
    }

    #[test]
    fn results_independent_of_jobs() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let base = run_sharded(&ctx, 10_000, 1, |_, r| Ok(r.map(|x| x * x % 7).sum::<u64>())).unwrap();
        for jobs in [2, 3, 8, 100] {
            let got = run_sharded(&ctx, 10_000, jobs, |_, r| Ok(r.map(|x| x * x % 7).sum::<u64>())).unwrap();
            assert_eq!(got, base);
        }
    }
}
