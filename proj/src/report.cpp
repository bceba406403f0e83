// SPDX-License-Identifier: Apache-2.0

#include "dgrd/report.hpp"

#include <cstdio>

#include "dgrd/common.hpp"

namespace dgrd {

void write_text_file(const std::string& path, const std::string& content) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    throw internal_error("write_text_file: cannot open '" + path + "'");
  }
  const std::size_t n =
      content.empty() ? 0 : std::fwrite(content.data(), 1, content.size(), f);
  const bool ok = (n == content.size()) && (std::fclose(f) == 0);
  if (!ok) {
    throw internal_error("write_text_file: short write to '" + path + "'");
  }
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) {
      line += ',';
    }
    line += cells[i];
  }
  line += '\n';
  return line;
}

std::string convergence_csv(const ConvergenceTable& table) {
  std::string out = "nx,h,dofs,l2_error,h1_error,triple_error,order_l2,"
                    "order_h1\n";
  for (const ConvergenceRow& r : table.rows) {
    out += csv_line({std::to_string(r.nx), format17(r.h),
                     std::to_string(r.dofs), format17(r.l2), format17(r.h1),
                     format17(r.triple), format17(r.order_l2),
                     format17(r.order_h1)});
  }
  return out;
}

std::string infsup_csv(const std::vector<InfSupRow>& rows) {
  std::string out = "nx,ny,p,sigma,lambda,zeta,nu,theta,dofs,gamma_h,m_h,"
                    "m_theory,xi1,xi2,gamma_lb\n";
  for (const InfSupRow& r : rows) {
    out += csv_line(
        {std::to_string(r.nx), std::to_string(r.ny), std::to_string(r.p),
         format17(r.params.sigma), format17(r.params.lambda),
         format17(r.params.zeta), format17(r.params.nu),
         format17(r.params.theta), std::to_string(r.measured.dofs),
         format17(r.measured.gamma_h), format17(r.measured.m_h),
         format17(r.theory.m), format17(r.theory.xi1), format17(r.theory.xi2),
         format17(r.theory.gamma_lb)});
  }
  return out;
}

std::string constants_csv(const TheoryConstants& theory,
                          const PenaltyParams& params, double h, int p) {
  std::string out = "beta,c,sigma,lambda,zeta,nu,theta,h,p,m,xi1,xi2,"
                    "gamma_lb,xi2_positive\n";
  out += csv_line({format17(theory.beta), format17(theory.c),
                   format17(params.sigma), format17(params.lambda),
                   format17(params.zeta), format17(params.nu),
                   format17(params.theta), format17(h), std::to_string(p),
                   format17(theory.m), format17(theory.xi1),
                   format17(theory.xi2), format17(theory.gamma_lb),
                   theory.xi2_positive ? "1" : "0"});
  return out;
}

std::string conservation_csv(const ConservationReport& report) {
  std::string out = "element,residual\n";
  for (std::size_t e = 0; e < report.residuals.size(); ++e) {
    out += csv_line({std::to_string(e), format17(report.residuals[e])});
  }
  return out;
}

std::string lemmas_csv(const LemmaReport& report) {
  std::string out = "sample,r1,r2\n";
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    out += csv_line({std::to_string(i), format17(report.samples[i].r1),
                     format17(report.samples[i].r2)});
  }
  return out;
}

std::string grid_export(const DGFunction& u, int nx_samples, int ny_samples,
                        const std::string& field_name) {
  if (nx_samples < 2 || ny_samples < 2) {
    throw invalid_input("grid_export: sample counts must be >= 2");
  }
  const Mesh& mesh = u.space->mesh();
  const double dx = mesh.domain.width() / (nx_samples - 1);
  const double dy = mesh.domain.height() / (ny_samples - 1);
  std::string out;
  out += "# vtk DataFile Version 3.0\n";
  out += field_name + " on a structured sample lattice\n";
  out += "ASCII\n";
  out += "DATASET STRUCTURED_POINTS\n";
  out += "DIMENSIONS " + std::to_string(nx_samples) + " " +
         std::to_string(ny_samples) + " 1\n";
  out += "ORIGIN " + format17(mesh.domain.xmin) + " " +
         format17(mesh.domain.ymin) + " 0\n";
  out += "SPACING " + format17(dx) + " " + format17(dy) + " 1\n";
  out += "POINT_DATA " +
         std::to_string(static_cast<long long>(nx_samples) * ny_samples) +
         "\n";
  out += "SCALARS " + field_name + " double 1\n";
  out += "LOOKUP_TABLE default\n";
  for (int j = 0; j < ny_samples; ++j) {
    const double y = mesh.domain.ymin + j * dy;
    for (int i = 0; i < nx_samples; ++i) {
      const double x = mesh.domain.xmin + i * dx;
      out += format17(u.eval(x, y));
      out += '\n';
    }
  }
  return out;
}

} // namespace dgrd
