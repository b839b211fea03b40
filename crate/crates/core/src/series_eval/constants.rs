//! `pi`, `log 2` and `sqrt 2`, memoized per precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Float, Integer};

#[derive(Clone, Debug)]
pub struct Constants {
    pub pi: Float,
    pub log2: Float,
    pub sqrt2: Float,
}

type Slot = Arc<OnceLock<Arc<Constants>>>;

fn registry() -> &'static Mutex<HashMap<u32, Slot>> {
    static REG: OnceLock<Mutex<HashMap<u32, Slot>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Constants at `bits` of precision. Concurrent callers for the same
/// precision share a single computation.
pub fn constants(bits: u32) -> Arc<Constants> {
    let slot = {
        let mut reg = registry().lock().expect("constants registry poisoned");
        reg.entry(bits).or_default().clone()
    };
    slot.get_or_init(|| Arc::new(compute(bits))).clone()
}

fn compute(bits: u32) -> Constants {
    let work = bits + 32;
    let to_float = |raw: Integer| Float::with_val(bits, Float::with_val(work + 64, &raw) >> work);
    Constants {
        pi: to_float(machin_pi(work)),
        log2: to_float(log2_atanh(work)),
        sqrt2: newton_sqrt2(bits),
    }
}

/// `atan(1/x) * 2^f` by its Taylor series in fixed point.
fn atan_inv(x: u32, f: u32) -> Integer {
    let x2 = Integer::from(x) * x;
    let mut power = (Integer::from(1) << f) / x;
    let mut sum = Integer::new();
    let mut k = 0u32;
    while power != 0 {
        let term = Integer::from(&power / (2 * k + 1));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// `pi = 16 atan(1/5) - 4 atan(1/239)`.
fn machin_pi(f: u32) -> Integer {
    atan_inv(5, f) * 16u32 - atan_inv(239, f) * 4u32
}

/// `log 2 = sum_k 2 / (3 (2k+1) 9^k)`.
fn log2_atanh(f: u32) -> Integer {
    let mut power = (Integer::from(2) << f) / 3u32;
    let mut sum = Integer::new();
    let mut k = 0u32;
    while power != 0 {
        sum += Integer::from(&power / (2 * k + 1));
        power /= 9u32;
        k += 1;
    }
    sum
}

fn newton_sqrt2(bits: u32) -> Float {
    let mut prec = 53u32;
    let mut x = Float::with_val(prec, std::f64::consts::SQRT_2);
    while prec < bits + 16 {
        prec = (2 * prec).min(bits + 32);
        x.set_prec(prec);
        let q = Float::with_val(prec, 2u32 / &x);
        x += q;
        x /= 2u32;
    }
    Float::with_val(bits, &x)
}
