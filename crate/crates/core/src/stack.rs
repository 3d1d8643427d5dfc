//! A thread pool with large stacks for the recursive proof traversals.

use std::sync::OnceLock;

use rayon::{ThreadPool, ThreadPoolBuilder};

pub(crate) const STACK_SIZE: usize = 512 << 20;

fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        ThreadPoolBuilder::new()
            .stack_size(STACK_SIZE)
            .thread_name(|i| format!("grl-deep-{i}"))
            .build()
            .expect("thread pool")
    })
}

/// Runs `f` on a thread of the pool unless already on one.
pub(crate) fn deep<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let p = pool();
    if p.current_thread_index().is_some() {
        f()
    } else {
        p.install(f)
    }
}
