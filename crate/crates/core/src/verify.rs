//! The built-in verification suite behind `frobkit verify-paper`.

use crate::constructors::{
    affine_binary_icosahedral, affine_group, alternating, dihedral, metacyclic, rep_phi, rep_psi, symmetric,
    verify_g_plus, verify_lemma_4_10, Check, Fq, VerificationReport,
};
use crate::frobenius::{find_frobenius_structures, kernel_by_partition, verify_structure_theorems};
use crate::group::Group;
use crate::gz_classify::is_gz_group;
use crate::Result;

/// Named Frobenius groups used by the consistency suite.
pub fn frobenius_corpus() -> Result<Vec<(String, Group)>> {
    let f3 = Fq::new(3)?;
    Ok(vec![
        ("S3".into(), symmetric(3)?),
        ("D5".into(), dihedral(5)?),
        ("A4".into(), alternating(4)?),
        ("C7:C3".into(), metacyclic(7, 3, 2)?),
        ("C11:C5".into(), metacyclic(11, 5, 3)?),
        ("C17:C8".into(), metacyclic(17, 8, 2)?),
        ("(C3xC3):C4".into(), affine_group(&f3, &[f3.mat(&[&[0, -1], &[1, 0]])])?),
        ("F11^2:SL2(F5)".into(), affine_binary_icosahedral(11)?),
    ])
}

fn representation_report(l: u32, q: u32) -> Result<VerificationReport> {
    let three = 3u64.pow(l);
    let mut checks = Vec::new();
    for (name, r, order, exp) in [
        ("Φ", rep_phi(l, q)?, 8 * three, 4 * three),
        ("Ψ", rep_psi(l, q)?, 16 * three, 8 * three),
    ] {
        checks.push(Check::with_detail(
            format!("{name} generates a group of order {order}"),
            r.generated_order as u64 == order,
            r.generated_order.to_string(),
        ));
        checks.push(Check::with_detail(
            format!("{name} has exponent {exp}"),
            r.generated_exponent == exp,
            r.generated_exponent.to_string(),
        ));
        for c in r.relations {
            checks.push(Check::with_detail(format!("{name}: {}", c.name), c.passed, c.detail));
        }
    }
    Ok(VerificationReport {
        subject: format!("representations at l = {l}, q = {q}"),
        checks,
    })
}

fn frobenius_report() -> Result<VerificationReport> {
    let mut checks = Vec::new();
    for (name, g) in frobenius_corpus()? {
        let structures = find_frobenius_structures(&g)?;
        checks.push(Check::new(format!("{name} is Frobenius"), !structures.is_empty()));
        for s in &structures {
            let t = verify_structure_theorems(&g, s)?;
            checks.push(Check::with_detail(
                format!("{name}: structure theorems"),
                t.all_hold(),
                format!("kernel {}, complement {}", s.kernel.order(), s.complement.order()),
            ));
            let k = kernel_by_partition(&g, &s.complement)?;
            checks.push(Check::new(format!("{name}: kernel by partition"), k == s.kernel));
            let c = s.complement.to_group(&g).0;
            checks.push(Check::new(format!("{name}: complement is GZ"), is_gz_group(&c)?));
        }
    }
    Ok(VerificationReport {
        subject: "Frobenius structure theorems".into(),
        checks,
    })
}

/// Lemma-matrix checks at `q`, the `G+` suite, the representation suite and
/// Frobenius structure consistency.
pub fn verify_paper(q: u32) -> Result<Vec<VerificationReport>> {
    Ok(vec![
        verify_lemma_4_10(q)?,
        verify_g_plus(25)?,
        representation_report(1, 73)?,
        representation_report(2, 73)?,
        frobenius_report()?,
    ])
}
