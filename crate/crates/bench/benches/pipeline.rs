use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hazcast_bench::{documents, rating_groups, SEVERE_DAY};
use hazcast_core::canonical::{emit_canonical, parse_canonical};
use hazcast_core::hazard::{HazardEngine, IconMode};
use hazcast_core::parser::parse_forecast;
use hazcast_core::render::{render, Format, LayoutCondition};
use hazcast_core::stats::one_way_anova;

fn parsing(c: &mut Criterion) {
    c.bench_function("parse_forecast/severe-day", |b| {
        b.iter(|| parse_forecast(black_box(SEVERE_DAY)))
    });
    let canonical = emit_canonical(&documents(1)[0]).unwrap();
    c.bench_function("parse_canonical", |b| {
        b.iter(|| parse_canonical(black_box(&canonical)))
    });
}

fn icons(c: &mut Criterion) {
    let engine = HazardEngine::default();
    let docs = documents(100);
    c.bench_function("derive_document_icons/100-docs", |b| {
        b.iter(|| {
            for d in &docs {
                black_box(engine.derive_document_icons(d, IconMode::Overall).unwrap());
                black_box(engine.derive_document_icons(d, IconMode::PerPeriod).unwrap());
            }
        })
    });
}

fn rendering(c: &mut Criterion) {
    let engine = HazardEngine::default();
    let doc = parse_forecast(SEVERE_DAY).document.unwrap();
    let mut group = c.benchmark_group("render/severe-day");
    for f in Format::ALL {
        group.bench_function(f.as_str(), |b| {
            b.iter(|| render(black_box(&doc), LayoutCondition::PerDayIcons, f, &engine).unwrap())
        });
    }
    group.finish();
}

fn anova(c: &mut Criterion) {
    let groups = rating_groups(32);
    c.bench_function("one_way_anova/4x32", |b| {
        b.iter(|| one_way_anova(black_box(&groups)).unwrap())
    });
}

criterion_group!(benches, parsing, icons, rendering, anova);
criterion_main!(benches);
