//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use su3count::commands::{run, Command, RunConfig};
use su3count::formats::{read_csv, ModRow};
use su3count_core::{
    build_census, count_partitions_exact, count_restricted, enumerate_restricted, fit_growth,
    fit_invbeta, module_counts, peak_location, singlet_series, xi, ExactFraction, FitConfig,
    GfTable, PartSet, ResidualSpace, SeriesPoints, SeriesValue, GROWTH_START,
};

struct Counting;

thread_local! {
    static LIVE: Cell<isize> = const { Cell::new(0) };
    static PEAK: Cell<isize> = const { Cell::new(0) };
    static ALLOCS: Cell<u64> = const { Cell::new(0) };
}

fn track(delta: isize) {
    let _ = LIVE.try_with(|live| {
        let now = live.get() + delta;
        live.set(now);
        let _ = PEAK.try_with(|p| p.set(p.get().max(now)));
        if delta > 0 {
            let _ = ALLOCS.try_with(|a| a.set(a.get() + 1));
        }
    });
}

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        track(layout.size() as isize);
        System.alloc(layout)
    }
    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        track(-(layout.size() as isize));
        System.dealloc(ptr, layout)
    }
    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        track(new_size as isize - layout.size() as isize);
        System.realloc(ptr, layout, new_size)
    }
}

#[global_allocator]
static GLOBAL: Counting = Counting;

/// Resets the peak to the current live size and returns the baseline.
fn reset_peak() -> isize {
    let live = LIVE.with(Cell::get);
    PEAK.with(|p| p.set(live));
    ALLOCS.with(|a| a.set(0));
    live
}

type Check = Result<String, String>;

fn timed(limit: Duration, elapsed: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn frac(n: u32, d: u32) -> ExactFraction {
    ExactFraction::new(BigUint::from(n), BigUint::from(d))
}

fn c1_anchor_values() -> Check {
    let t = Instant::now();
    let census = build_census(6);
    let six = module_counts(6, &census).map_err(|e| e.to_string())?;
    let five = module_counts(5, &census).map_err(|e| e.to_string())?;
    let got = (
        six.total.clone(),
        six.singlet.clone(),
        six.singlet_fraction(),
        five.total.clone(),
        five.singlet.clone(),
        five.singlet_fraction(),
    );
    let want = (
        BigUint::from(8u32),
        BigUint::from(3u32),
        frac(3, 8),
        BigUint::from(3u32),
        BigUint::from(3u32),
        frac(1, 1),
    );
    if got != want {
        return Err(format!("got {got:?}"));
    }
    timed(Duration::from_secs(1), t.elapsed())?;
    Ok(format!("Mod(6)=8 Mod1(6)=3 (3/8), Mod(5)=3 Mod1(5)=3 (1) in {:.2?}", t.elapsed()))
}

/// Dimension of diagram `(n1, n2)`, written out independently of the library.
fn diagram_dim(n1: u64, n2: u64) -> u64 {
    (n1 + 2) * (n2 + 1) * (n1 - n2 + 1) / 2
}

fn c2_census() -> Check {
    const LIMIT: u64 = 5000;
    let t = Instant::now();
    let mut tally = vec![0u64; LIMIT as usize + 1];
    let mut n1 = 0;
    // the smallest dimension in row n1 is at n2 = 0 or n2 = n1
    while diagram_dim(n1, 0) <= LIMIT {
        for n2 in 0..=n1 {
            let d = diagram_dim(n1, n2);
            if d <= LIMIT {
                tally[d as usize] += 1;
            }
        }
        n1 += 1;
    }
    for d in 1..=LIMIT {
        if xi(d) != tally[d as usize] {
            return Err(format!("xi({d}) = {}, brute force {}", xi(d), tally[d as usize]));
        }
    }
    let census = build_census(LIMIT as u32);
    if !census.closed_form_mismatches().is_empty() {
        return Err(format!("census mismatches at {:?}", census.closed_form_mismatches()));
    }
    if [2, 4, 5].iter().any(|&d| xi(d) != 0) {
        return Err("xi(2), xi(4) or xi(5) nonzero".into());
    }
    let prefix: Vec<u32> = census.support().take(7).collect();
    if prefix != [1, 3, 6, 8, 10, 15, 21] {
        return Err(format!("support prefix {prefix:?}"));
    }
    timed(Duration::from_secs(30), t.elapsed())?;
    Ok(format!("xi(d) equals diagram tally for d <= {LIMIT} in {:.2?}", t.elapsed()))
}

/// Euler's pentagonal recurrence, in machine integers.
fn euler_partitions(upto: usize) -> Vec<u64> {
    let mut p = vec![0u64; upto + 1];
    p[0] = 1;
    for n in 1..=upto {
        let mut acc: i128 = 0;
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[n - g1] as i128;
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                acc += sign * p[n - g2] as i128;
            }
        }
        p[n] = acc as u64;
    }
    p
}

fn c3_partitions() -> Check {
    let t = Instant::now();
    let euler = euler_partitions(60);
    for n in 0..=60u32 {
        let mut stream = enumerate_restricted(n, &PartSet::PositiveIntegers, n);
        let mut count = 0u64;
        while stream.advance().is_some() {
            count += 1;
        }
        if count != euler[n as usize] || BigUint::from(count) != count_partitions_exact(n) {
            return Err(format!("p({n}): stream {count}, recurrence {}", euler[n as usize]));
        }
    }
    if euler[6] != 11 {
        return Err(format!("p(6) = {}", euler[6]));
    }
    timed(Duration::from_secs(60), t.elapsed())?;
    Ok(format!("stream counts equal p(n) for n <= 60, p(6)=11, p(60)={} in {:.2?}", euler[60], t.elapsed()))
}

fn c4_dual_path() -> Check {
    let census = build_census(110);
    let t = Instant::now();
    let table = GfTable::build(110, &census).map_err(|e| e.to_string())?;
    let singlets = (1..=110)
        .map(|d| table.singlet(d, &census))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let gf_time = t.elapsed();
    let t = Instant::now();
    let mut cells = 0;
    for d in 1..=110u32 {
        let m = module_counts(d, &census).map_err(|e| e.to_string())?;
        if m.total != table.total(d) || m.singlet != singlets[d as usize - 1] {
            return Err(format!("totals differ at D = {d}"));
        }
        if m.by_components.as_slice() != table.row(d) {
            return Err(format!("(D, N) row differs at D = {d}"));
        }
        cells += m.by_components.len();
    }
    let enum_time = t.elapsed();
    timed(Duration::from_secs(5), gf_time)?;
    timed(Duration::from_secs(600), enum_time)?;
    Ok(format!(
        "Mod, Mod1 and {cells} (D, N) cells agree for D <= 110; enumeration {enum_time:.2?}, gf {gf_time:.2?}"
    ))
}

fn c5_normalization() -> Check {
    let census = build_census(110);
    let table = GfTable::build(110, &census).map_err(|e| e.to_string())?;
    let one = frac(1, 1);
    for d in 1..=110 {
        let dist = table.nss_distribution(d);
        let sum: ExactFraction = (0..=d).map(|n| dist.weight(n)).sum();
        if sum != one {
            return Err(format!("sum f_{d}(N) = {sum}"));
        }
    }
    Ok("sum over N of f_d(N) is exactly 1 for d <= 110".into())
}

fn c6_peaks() -> Check {
    let census = build_census(100);
    let table = GfTable::build(100, &census).map_err(|e| e.to_string())?;
    let p76 = peak_location(&table.nss_distribution(76));
    let p100 = peak_location(&table.nss_distribution(100));
    if !(12..=19).contains(&p76) || !(16..=24).contains(&p100) {
        return Err(format!("argmax f_76 = {p76}, argmax f_100 = {p100}"));
    }
    Ok(format!("argmax f_76 = {p76} in [12, 19], argmax f_100 = {p100} in [16, 24]"))
}

fn c7_invbeta() -> Check {
    let census = build_census(100);
    let dist = module_counts(100, &census).map_err(|e| e.to_string())?.nss_distribution();
    let t = Instant::now();
    let fits = fit_invbeta(&dist, &FitConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let (s, u) = (&fits.scaled, &fits.unscaled);
    if s.delta_f > 1e-3 || u.delta_f > 1e-3 {
        return Err(format!("delta_f scaled {:.3e}, unscaled {:.3e}", s.delta_f, u.delta_f));
    }
    timed(Duration::from_secs(10), elapsed)?;
    Ok(format!(
        "delta_f scaled {:.2e} (alpha {:.2}, beta {:.2}, s {:.2}), unscaled {:.2e} (alpha {:.2}, beta {:.3}) in {elapsed:.2?}",
        s.delta_f, s.alpha, s.beta, s.scale, u.delta_f, u.alpha, u.beta
    ))
}

fn growth_points(d_max: u32, residue: u32) -> Result<SeriesPoints, String> {
    let census = build_census(d_max);
    let points = (1..=d_max)
        .filter(|d| d % 3 == residue)
        .map(|d| {
            let m = module_counts(d, &census).map_err(|e| e.to_string())?;
            Ok((d, SeriesValue::Exact(ExactFraction::from_integer(m.total))))
        })
        .collect::<Result<Vec<_>, String>>()?;
    SeriesPoints::new(points, Some(residue as u8)).map_err(|e| e.to_string())
}

fn c8_growth() -> Check {
    let series = growth_points(110, 1)?;
    let fit = fit_growth(&series, &FitConfig::default()).map_err(|e| e.to_string())?;
    if !(0.40..=0.52).contains(&fit.c) || !(2.2..=3.2).contains(&fit.b) {
        return Err(format!("b = {}, c = {}", fit.b, fit.c));
    }
    let linear = FitConfig { growth_residuals: ResidualSpace::Linear, ..FitConfig::default() };
    let lin = fit_growth(&series, &linear).map_err(|e| e.to_string())?;

    let (a0, b0, c0) = (0.0772, 2.70605, 0.459802);
    let synthetic = SeriesPoints::from_reals(
        (1..=110u32).filter(|n| n % 3 == 1).map(|n| (n, a0 / n as f64 * (b0 * (n as f64).powf(c0)).exp())),
    )
    .map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for config in [FitConfig::default(), linear] {
        let s = fit_growth(&synthetic, &config).map_err(|e| e.to_string())?;
        for (got, want) in [(s.a, a0), (s.b, b0), (s.c, c0)] {
            worst = worst.max(((got - want) / want).abs());
        }
    }
    if worst > 1e-6 {
        return Err(format!("synthetic recovery off by {worst:.2e} relative"));
    }
    let (ga, gb, gc) = GROWTH_START;
    Ok(format!(
        "log fit b = {:.5}, c = {:.5}; linear fit a = {:.5}, b = {:.5}, c = {:.6}; synthetic worst rel err {worst:.1e}; start ({ga}, {gb}, {gc})",
        fit.b, fit.c, lin.a, lin.b, lin.c
    ))
}

fn c9_singlet_series() -> Check {
    let census = build_census(110);
    let mut seen = Vec::new();
    for r in 0..3u8 {
        let series = singlet_series(&census, 110, r).map_err(|e| e.to_string())?;
        for (d, value) in series.points() {
            let SeriesValue::Exact(f) = value else {
                return Err(format!("D = {d} not exact"));
            };
            if *d == 5 && *f != frac(1, 1) || *d == 6 && *f != frac(3, 8) {
                return Err(format!("anchor D = {d} gives {f}"));
            }
            seen.push(*d);
        }
    }
    seen.sort_unstable();
    if seen != (1..=110).collect::<Vec<_>>() {
        return Err("residue classes do not partition 1..=110".into());
    }

    let mut config = RunConfig::new(Command::Mod);
    config.d_max = 110;
    let outcome = run(&config).map_err(|e| e.to_string())?;
    let rows: Vec<ModRow> = read_csv(outcome.output.as_slice()).map_err(|e| e.to_string())?;
    for row in &rows {
        let (n, d) = row.singlet_fraction_exact.split_once('/').ok_or("fraction without '/'")?;
        let parse = |s: &str| s.parse::<BigUint>().map_err(|e| e.to_string());
        let emitted = ExactFraction::new_raw(parse(n)?, parse(d)?);
        let expected = ExactFraction::new(parse(&row.mod_singlet)?, parse(&row.mod_total)?);
        if emitted != expected || *emitted.numer() != *expected.numer() {
            return Err(format!("emitted fraction at D = {} is {}", row.dimension, row.singlet_fraction_exact));
        }
    }
    let anchors: Vec<&str> = rows.iter().take(6).map(|r| r.singlet_fraction_exact.as_str()).collect();
    if anchors[4] != "1/1" || anchors[5] != "3/8" {
        return Err(format!("emitted anchors {anchors:?}"));
    }
    Ok(format!("{} exact fractions across 3 residue classes; emitted D=5 1/1, D=6 3/8", rows.len()))
}

fn c10_streaming() -> Check {
    const N: u32 = 110;
    let census = build_census(N);
    let parts = census.support_set();
    let expected = count_restricted(N, &parts, N);

    let mut stream = enumerate_restricted(N, &parts, N);
    let baseline = reset_peak();
    let mut count = 0u64;
    let mut longest = 0;
    while let Some(p) = stream.advance() {
        count += 1;
        longest = longest.max(p.len());
    }
    let peak = PEAK.with(Cell::get) - baseline;
    let allocs = ALLOCS.with(Cell::get);
    let steps = stream.steps();
    drop(stream);

    let p_n = count_partitions_exact(N);
    if BigUint::from(count) != expected {
        return Err(format!("streamed {count}, coin-change count {expected}"));
    }
    // scratch for one partition plus the stack of choices, both at most N long
    let bound = 4 * 8 * N as isize;
    if peak > bound {
        return Err(format!("peak live heap during enumeration {peak} B exceeds {bound} B"));
    }
    if BigUint::from(steps) >= p_n {
        return Err(format!("{steps} search steps, not below p({N}) = {p_n}"));
    }
    Ok(format!(
        "{count} partitions of {N}, longest {longest} parts; extra heap peak {peak} B, {allocs} allocations; {steps} steps vs p({N}) = {p_n}"
    ))
}

fn main() {
    // tolerate libtest-style flags passed through `cargo test`
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(&str, fn() -> Check); 10] = [
        ("1 anchor values", c1_anchor_values),
        ("2 census oracle", c2_census),
        ("3 partition oracle", c3_partitions),
        ("4 dual-path equivalence", c4_dual_path),
        ("5 normalization", c5_normalization),
        ("6 d/5 rule", c6_peaks),
        ("7 inverted-beta fit", c7_invbeta),
        ("8 growth fit", c8_growth),
        ("9 singlet-fraction series", c9_singlet_series),
        ("10 streaming memory", c10_streaming),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
