mod common;

use common::{brute_nearest, random_cloud, rng, sq};
use pcqa_core::baseline::{d1, d2, hausdorff_po2po, plane_error, GeometryPeak, NormalSource};
use pcqa_core::PointCloud;
use rand::Rng;

fn unit(g: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [g.random_range(-1.0..1.0), g.random_range(-1.0..1.0), g.random_range(-1.0f64..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn with_random_normals(c: PointCloud, g: &mut impl Rng) -> PointCloud {
    let n = (0..c.len()).map(|_| unit(g)).collect();
    c.with_normals(n).unwrap()
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = v.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

#[test]
fn d1_d2_hausdorff_match_exhaustive_search() {
    let mut g = rng(8);
    for _ in 0..60 {
        let p = g.random_range(3..=7);
        let a = with_random_normals(
            {
                let n = g.random_range(1..=100);
                random_cloud(&mut g, n, p)
            },
            &mut g,
        );
        let b = {
            let n = g.random_range(1..=100);
            random_cloud(&mut g, n, p)
        };
        let (ap, bp) = (a.positions(), b.positions());
        let n = a.normals().unwrap();
        let ab: Vec<usize> = ap.iter().map(|q| brute_nearest(q, bp)).collect();
        let ba: Vec<usize> = bp.iter().map(|q| brute_nearest(q, ap)).collect();

        let r = d1(&a, &b, GeometryPeak::BoxDiagonal).unwrap();
        let e_ab = mean((0..ap.len()).map(|i| sq(&ap[i], &bp[ab[i]]) as f64));
        let e_ba = mean((0..bp.len()).map(|j| sq(&bp[j], &ap[ba[j]]) as f64));
        assert_eq!((r.reference_to_degraded, r.degraded_to_reference, r.mse), (e_ab, e_ba, e_ab.max(e_ba)));

        let r = d2(&a, &b, NormalSource::FromCloud, GeometryPeak::BoxDiagonal).unwrap();
        let dot2 = |x: &[u32; 3], y: &[u32; 3], m: &[f64; 3]| {
            let d: Vec<f64> = (0..3).map(|k| f64::from(x[k]) - f64::from(y[k])).collect();
            let t = d[0] * m[0] + d[1] * m[1] + d[2] * m[2];
            t * t
        };
        let e_ab = mean((0..ap.len()).map(|i| dot2(&ap[i], &bp[ab[i]], &n[i])));
        let e_ba = mean((0..bp.len()).map(|j| dot2(&bp[j], &ap[ba[j]], &n[ba[j]])));
        assert_eq!((r.reference_to_degraded, r.degraded_to_reference), (e_ab, e_ba));

        let h_ab = (0..ap.len()).map(|i| sq(&ap[i], &bp[ab[i]])).max().unwrap();
        let h_ba = (0..bp.len()).map(|j| sq(&bp[j], &ap[ba[j]])).max().unwrap();
        assert_eq!(hausdorff_po2po(&a, &b).unwrap(), (h_ab.max(h_ba) as f64).sqrt());
    }
}

#[test]
fn plane_error_never_exceeds_point_error() {
    let mut g = rng(10);
    for _ in 0..10_000 {
        let a = [g.random_range(0..1024), g.random_range(0..1024), g.random_range(0..1024)];
        let b = [g.random_range(0..1024), g.random_range(0..1024), g.random_range(0..1024)];
        let e2 = plane_error(&a, &b, &unit(&mut g));
        let e1 = sq(&a, &b) as f64;
        assert!(e2 <= e1 * (1.0 + 1e-12), "{a:?} {b:?}: {e2} > {e1}");
    }
}
