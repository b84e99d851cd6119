//! Minimal indexed worker pool.
//!
//! Results land in their input slot, so the output order never depends on
//! scheduling; sweeps stay byte-reproducible at any worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

pub fn run_indexed<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync,
{
    let workers = workers.clamp(1, items.len().max(1));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    let mut slots: Vec<Option<R>> = Vec::with_capacity(items.len());
    slots.resize_with(items.len(), || None);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let next = &next;
            let f = &f;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                if tx.send((i, f(i, &items[i]))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (i, r) in rx {
            slots[i] = Some(r);
        }
    });

    slots
        .into_iter()
        .map(|s| s.expect("all slots filled"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_are_in_input_order() {
        let items: Vec<usize> = (0..100).collect();
        for workers in [1, 3, 8] {
            let out = run_indexed(&items, workers, |i, &x| {
                // Vary per-item latency to scramble completion order.
                std::thread::sleep(std::time::Duration::from_micros((x % 7) as u64 * 50));
                i * 10 + x
            });
            for (i, v) in out.iter().enumerate() {
                assert_eq!(*v, i * 11);
            }
        }
    }

    #[test]
    fn empty_input_is_fine() {
        let out: Vec<u32> = run_indexed(&[] as &[u32], 4, |_, &x| x);
        assert!(out.is_empty());
    }
}
