// SPDX-License-Identifier: Apache-2.0
//
// Deterministic report emission: CSV tables with fixed headers, fixed row
// ordering and 17-significant-digit formatting, plus a legacy-ASCII
// structured-points grid export. No timestamps or other run-varying data
// ever enter a report, so identical inputs give byte-identical files.
#pragma once

#include <string>
#include <vector>

#include "dgrd/analysis.hpp"
#include "dgrd/study.hpp"

namespace dgrd {

/// Write `content` to `path` in binary mode (throws internal_error on I/O
/// failure), creating or truncating the file.
void write_text_file(const std::string& path, const std::string& content);

/// One comma-separated line; cells must not contain commas or newlines.
std::string csv_line(const std::vector<std::string>& cells);

/// header: nx,h,dofs,l2_error,h1_error,triple_error,order_l2,order_h1
std::string convergence_csv(const ConvergenceTable& table);

/// One measured/theory row per configuration.
struct InfSupRow {
  int nx = 0, ny = 0, p = 0;
  PenaltyParams params;
  MeasuredConstants measured;
  TheoryConstants theory;
};
/// header: nx,ny,p,sigma,lambda,zeta,nu,theta,dofs,gamma_h,m_h,
///         m_theory,xi1,xi2,gamma_lb
std::string infsup_csv(const std::vector<InfSupRow>& rows);

/// header: beta,c,sigma,lambda,zeta,nu,theta,h,p,m,xi1,xi2,gamma_lb,
///         xi2_positive  (single data row)
std::string constants_csv(const TheoryConstants& theory,
                          const PenaltyParams& params, double h, int p);

/// header: element,residual  (one row per element, element order)
std::string conservation_csv(const ConservationReport& report);

/// header: sample,r1,r2  (one row per sample, sample order)
std::string lemmas_csv(const LemmaReport& report);

/// Legacy-ASCII structured-points grid file (VTK DataFile Version 3.0)
/// sampling u on an (nx_samples x ny_samples) vertex lattice spanning the
/// mesh domain, x fastest. Sample counts must be >= 2.
std::string grid_export(const DGFunction& u, int nx_samples, int ny_samples,
                        const std::string& field_name);

} // namespace dgrd
