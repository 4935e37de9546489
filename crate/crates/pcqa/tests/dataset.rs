mod common;

use std::fs;
use std::path::Path;
use std::process::Command;

use common::{degrade, textured_shell, write_cloud};
use pcqa::cache::read_cache;
use pcqa::dataset::evaluate_dataset;
use pcqa::manifest::{Manifest, ManifestOptions};
use pcqa_core::eval::{FusionMode, Group};
use pcqa_core::metrics2d::Metric2d;
use pcqa_core::pipeline::{PipelineConfig, ScoreSource};

const CODECS: [&str; 3] = ["vpcc", "gpcc-octree-raht", "gpcc-trisoup-lifting"];

/// Twelve degraded versions of one shell; MOS is filled in by `mos_of`.
fn build(dir: &Path, mos_of: impl Fn(usize) -> f64) -> std::path::PathBuf {
    let c = textured_shell(5, 2);
    let reference = dir.join("ref.ply");
    write_cloud(&reference, &c);
    let mut manifest = String::from("sample_id,reference,degraded,mos,codec_tag\n");
    for i in 0..12 {
        let d = degrade(&c, 2.0 + 3.0 * i as f64, 0.02 * i as f64, i as u64);
        let name = format!("d{i}.ply");
        write_cloud(&dir.join(&name), &d);
        manifest.push_str(&format!("s{i},ref.ply,{name},{},{}\n", mos_of(i), CODECS[i % 3]));
    }
    let path = dir.join("manifest.csv");
    fs::write(&path, manifest).unwrap();
    path
}

fn pcqa(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_pcqa")).args(args).output().unwrap()
}

#[test]
fn batch_fit_and_splitcheck_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = build(dir.path(), |i| 4.8 - 0.3 * i as f64);
    let m = manifest.to_str().unwrap();
    let cache = dir.path().join("cache.csv");
    let c = cache.to_str().unwrap();
    let o = pcqa(&["batch", "--manifest", m, "--metric", "ypsnr", "--out", c]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first = fs::read_to_string(&cache).unwrap();
    assert_eq!(first.lines().count(), 25);
    let o = pcqa(&["batch", "--manifest", m, "--metric", "ypsnr", "--out", c]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&cache).unwrap(), first);

    let report = dir.path().join("fit.json");
    let o = pcqa(&["fit", "--scores", c, "--manifest", m, "--group", "all", "--out", report.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["groups"][0]["group"], "all");
    assert_eq!(r["groups"][0]["n"], 12);
    assert!(r["groups"][0]["srocc"].as_f64().unwrap() > 0.9);

    // only four vpcc samples: too few to evaluate
    let o = pcqa(&["fit", "--scores", c, "--manifest", m, "--group", "vpcc", "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let split = |out: &Path| {
        let o = pcqa(&["splitcheck", "--scores", c, "--manifest", m, "--seed", "7", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(out).unwrap()
    };
    let (a, b) = (split(&dir.path().join("a.csv")), split(&dir.path().join("b.csv")));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 101);
}

#[test]
fn group_filter_scores_only_selected_rows() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = build(dir.path(), |_| 3.0);
    let cache = dir.path().join("cache.csv");
    let o = pcqa(&[
        "batch",
        "--manifest",
        manifest.to_str().unwrap(),
        "--metric",
        "ssim",
        "--group",
        "vpcc",
        "--out",
        cache.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let scores = read_cache(&cache).unwrap();
    assert_eq!(scores.keys().cloned().collect::<Vec<_>>(), ["s0", "s3", "s6", "s9"]);
}

#[test]
fn identical_pairs_are_rejected_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let c = textured_shell(4, 1);
    write_cloud(&dir.path().join("a.ply"), &c);
    let mut text = String::from("sample_id,reference,degraded,mos,codec_tag\n");
    for i in 0..6 {
        text.push_str(&format!("s{i},a.ply,a.ply,5,vpcc\n"));
    }
    let path = dir.path().join("m.csv");
    fs::write(&path, text).unwrap();
    let manifest = Manifest::load(&path, &ManifestOptions::default()).unwrap();
    let e = evaluate_dataset(
        &manifest,
        ScoreSource::Builtin(Metric2d::Ssim),
        &PipelineConfig::default(),
        None,
        &[Group::All],
        FusionMode::PerGroup,
    )
    .unwrap_err();
    assert!(e.to_string().contains("constant objective scores"), "{e}");
}

#[test]
fn planted_fusion_weights_are_recovered() {
    let dir = tempfile::tempdir().unwrap();
    // score once to learn the branch scores, then plant MOS on them
    let probe = build(dir.path(), |_| 3.0);
    let manifest = Manifest::load(&probe, &ManifestOptions::default()).unwrap();
    let source = ScoreSource::Builtin(Metric2d::YPsnr);
    let cfg = PipelineConfig::default();
    let samples: Vec<_> = manifest.samples.iter().collect();
    let scores = pcqa::dataset::score_samples(&samples, source, &cfg, None).unwrap();
    let fused: Vec<f64> = scores.iter().map(|(_, b)| 0.6 * b.reference + 0.4 * b.degraded).collect();
    // fusion has no intercept, so plant MOS proportional to the fused score
    let top = fused.iter().cloned().fold(f64::MIN, f64::max);
    let k = 4.9 / top;
    let mut text = String::from("sample_id,reference,degraded,mos,codec_tag\n");
    for (s, q) in manifest.samples.iter().zip(&fused) {
        let name = |p: &Path| p.file_name().unwrap().to_str().unwrap().to_string();
        text.push_str(&format!("{},{},{},{},vpcc\n", s.sample_id, name(&s.reference), name(&s.degraded), k * q));
    }
    let path = dir.path().join("planted.csv");
    fs::write(&path, text).unwrap();
    let planted = Manifest::load(&path, &ManifestOptions::default()).unwrap();
    let reports = evaluate_dataset(&planted, source, &cfg, None, &[Group::All], FusionMode::PerGroup).unwrap();
    let r = &reports[0];
    assert!(r.correlations.plcc > 0.999, "{r:?}");
    assert!((r.fusion.alpha - 0.6 * k).abs() < 1e-6 && (r.fusion.beta - 0.4 * k).abs() < 1e-6, "{r:?}");
}

#[test]
fn manifest_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let load = |text: &str| {
        fs::write(&path, text).unwrap();
        Manifest::load(&path, &ManifestOptions::default()).map(|_| ()).unwrap_err().to_string()
    };
    let head = "sample_id,reference,degraded,mos,codec_tag\n";
    assert!(load(&format!("{head}a,x.ply,y.ply,3,vpcc\n")).contains("unresolvable path"));
    fs::write(dir.path().join("x.ply"), "").unwrap();
    assert!(load(&format!("{head}a,x.ply,x.ply,7,vpcc\n")).contains("outside [1, 5]"));
    assert!(load(&format!("{head}a,x.ply,x.ply,3,mpeg\n")).contains("unknown codec_tag"));
    assert!(load(&format!("{head}a,x.ply,x.ply,3,vpcc\na,x.ply,x.ply,3,vpcc\n")).contains("duplicate sample_id"));
}
