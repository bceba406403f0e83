// SPDX-License-Identifier: Apache-2.0

#include "dgrd/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "dgrd/common.hpp"
#include "dgrd/kernels.hpp"
#include "local_ops.hpp"

namespace dgrd {

using detail::RowMat;
using detail::TraceTable;

void PenaltyParams::validate() const {
  if (sigma < 0.0 || (sigma == 0.0 && !allow_sigma_zero)) {
    throw invalid_input(
        "PenaltyParams: sigma must be > 0 (sigma = 0 requires the explicit "
        "comparison mode)");
  }
  if (lambda < 0.0 || zeta < 0.0 || nu < 0.0 || theta < 0.0) {
    throw invalid_input("PenaltyParams: exponents must be >= 0");
  }
}

double PenaltyParams::tau(double h, int p) const {
  return sigma * std::pow(h, lambda) / std::pow(static_cast<double>(p), zeta);
}

double PenaltyParams::omega(double h, int p) const {
  return std::pow(h, nu) / std::pow(static_cast<double>(p), theta);
}

std::uint64_t PenaltyParams::fingerprint() const {
  std::uint64_t f = fnv1a(sigma);
  f = fnv1a(lambda, f);
  f = fnv1a(zeta, f);
  f = fnv1a(nu, f);
  f = fnv1a(theta, f);
  f = fnv1a(static_cast<std::uint64_t>(allow_sigma_zero ? 1 : 0), f);
  return f;
}

namespace {

enum class FacePath { kDirect, kReduced };

struct FaceBlocks {
  RowMat oo, on, no, nn;
};

// Accumulate one test-side x trial-side block of the interior-face terms.
// sa/sb are the jump signs (+1 owner, -1 neighbor) of the two sides.
void accumulate_face_block(const TraceTable& ta, double sa,
                           const TraceTable& tb, double sb, double tau,
                           FacePath path, RowMat& block) {
  for (int q = 0; q < ta.nq; ++q) {
    const double w = ta.wq[static_cast<std::size_t>(q)];
    const std::size_t ra = static_cast<std::size_t>(q) * ta.nb;
    const std::size_t rb = static_cast<std::size_t>(q) * tb.nb;
    const double* phia = &ta.phi[ra];
    const double* fluxa = &ta.flux[ra];
    const double* phib = &tb.phi[rb];
    const double* fluxb = &tb.flux[rb];
    for (int i = 0; i < ta.nb; ++i) {
      double c_flux, c_phi;
      if (path == FacePath::kDirect) {
        // +<v>[K grad u . n] - <u>[K grad v . n] + tau [.][.]
        c_flux = w * (0.5 * phia[i] * sb + tau * sa * sb * fluxa[i]);
        c_phi = -w * 0.5 * sa * fluxa[i];
      } else {
        // -<K grad u . n>[v] + <K grad v . n>[u] + tau [.][.]
        c_flux = w * (-0.5 * sa * phia[i] + tau * sa * sb * fluxa[i]);
        c_phi = w * 0.5 * sb * fluxa[i];
      }
      double* out = block.row(i).data();
      kernels::axpy(c_flux, fluxb, out, static_cast<std::size_t>(tb.nb));
      kernels::axpy(c_phi, phib, out, static_cast<std::size_t>(tb.nb));
    }
  }
}

FaceBlocks interior_face_blocks(const BrokenSpace& space,
                                const CoefficientField& K,
                                const InteriorFace& f, double tau,
                                FacePath path) {
  const TraceTable to = detail::trace_table(space, K, f.owner, f.owner_edge,
                                            f.normal[0], f.normal[1]);
  const TraceTable tn = detail::trace_table(space, K, f.neighbor,
                                            f.neighbor_edge, f.normal[0],
                                            f.normal[1]);
  FaceBlocks b;
  b.oo = RowMat::Zero(to.nb, to.nb);
  b.on = RowMat::Zero(to.nb, tn.nb);
  b.no = RowMat::Zero(tn.nb, to.nb);
  b.nn = RowMat::Zero(tn.nb, tn.nb);
  accumulate_face_block(to, 1.0, to, 1.0, tau, path, b.oo);
  accumulate_face_block(to, 1.0, tn, -1.0, tau, path, b.on);
  accumulate_face_block(tn, -1.0, to, 1.0, tau, path, b.no);
  accumulate_face_block(tn, -1.0, tn, -1.0, tau, path, b.nn);
  return b;
}

// Reduced-path domain-boundary block: -int (v K grad u . mu - u K grad v . mu).
RowMat boundary_face_block(const BrokenSpace& space, const CoefficientField& K,
                           const BoundaryFace& f) {
  const TraceTable t = detail::trace_table(space, K, f.element, f.edge,
                                           f.normal[0], f.normal[1]);
  RowMat block = RowMat::Zero(t.nb, t.nb);
  for (int q = 0; q < t.nq; ++q) {
    const double w = t.wq[static_cast<std::size_t>(q)];
    const std::size_t r = static_cast<std::size_t>(q) * t.nb;
    const double* phi = &t.phi[r];
    const double* flux = &t.flux[r];
    for (int i = 0; i < t.nb; ++i) {
      double* out = block.row(i).data();
      kernels::axpy(-w * phi[i], flux, out, static_cast<std::size_t>(t.nb));
      kernels::axpy(w * flux[i], phi, out, static_cast<std::size_t>(t.nb));
    }
  }
  return block;
}

SparseMat assemble_path(const BrokenSpace& space, const CoefficientField& K,
                        const PenaltyParams& params, int threads,
                        FacePath path) {
  params.validate();
  const Mesh& mesh = space.mesh();
  const double tau = params.tau(mesh.h, space.min_degree());
  const int ne = mesh.num_elements();
  const int nf = static_cast<int>(mesh.interior_faces.size());
  const int nbf = static_cast<int>(mesh.boundary_faces.size());
  threads = std::max(1, threads);

  // Local blocks are computed independently (possibly in parallel) and then
  // scattered sequentially in canonical element/face order, so the result
  // is bitwise identical for every thread count.
  std::vector<RowMat> elem_blocks(static_cast<std::size_t>(ne));
  parallel_for(ne, threads, [&](int begin, int end) {
    for (int e = begin; e < end; ++e) {
      RowMat a = detail::local_star_gram(space, K, e);
      if (path == FacePath::kDirect) {
        const RowMat t = detail::local_flux_moments(space, K, e);
        a += t.transpose() - t;
      }
      elem_blocks[static_cast<std::size_t>(e)] = std::move(a);
    }
  });

  std::vector<FaceBlocks> face_blocks(static_cast<std::size_t>(nf));
  parallel_for(nf, threads, [&](int begin, int end) {
    for (int f = begin; f < end; ++f) {
      face_blocks[static_cast<std::size_t>(f)] = interior_face_blocks(
          space, K, mesh.interior_faces[static_cast<std::size_t>(f)], tau,
          path);
    }
  });

  std::vector<RowMat> bdry_blocks;
  if (path == FacePath::kReduced) {
    bdry_blocks.resize(static_cast<std::size_t>(nbf));
    parallel_for(nbf, threads, [&](int begin, int end) {
      for (int f = begin; f < end; ++f) {
        bdry_blocks[static_cast<std::size_t>(f)] = boundary_face_block(
            space, K, mesh.boundary_faces[static_cast<std::size_t>(f)]);
      }
    });
  }

  std::vector<Eigen::Triplet<double>> trips;
  std::size_t count = 0;
  for (const RowMat& b : elem_blocks) {
    count += static_cast<std::size_t>(b.size());
  }
  for (const FaceBlocks& b : face_blocks) {
    count += static_cast<std::size_t>(b.oo.size() + b.on.size() +
                                      b.no.size() + b.nn.size());
  }
  for (const RowMat& b : bdry_blocks) {
    count += static_cast<std::size_t>(b.size());
  }
  trips.reserve(count);

  auto scatter = [&trips](const RowMat& b, int row0, int col0) {
    for (int i = 0; i < b.rows(); ++i) {
      for (int j = 0; j < b.cols(); ++j) {
        trips.emplace_back(row0 + i, col0 + j, b(i, j));
      }
    }
  };
  for (int e = 0; e < ne; ++e) {
    scatter(elem_blocks[static_cast<std::size_t>(e)], space.offset(e),
            space.offset(e));
  }
  for (int f = 0; f < nf; ++f) {
    const InteriorFace& face = mesh.interior_faces[static_cast<std::size_t>(f)];
    const int oo = space.offset(face.owner);
    const int no = space.offset(face.neighbor);
    const FaceBlocks& b = face_blocks[static_cast<std::size_t>(f)];
    scatter(b.oo, oo, oo);
    scatter(b.on, oo, no);
    scatter(b.no, no, oo);
    scatter(b.nn, no, no);
  }
  for (std::size_t f = 0; f < bdry_blocks.size(); ++f) {
    const BoundaryFace& face = mesh.boundary_faces[f];
    scatter(bdry_blocks[f], space.offset(face.element),
            space.offset(face.element));
  }

  SparseMat m(space.num_dofs(), space.num_dofs());
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

} // namespace

SparseMat assemble_direct(const BrokenSpace& space, const CoefficientField& K,
                          const PenaltyParams& params, int threads) {
  return assemble_path(space, K, params, threads, FacePath::kDirect);
}

SparseMat assemble_reduced(const BrokenSpace& space, const CoefficientField& K,
                           const PenaltyParams& params, int threads) {
  return assemble_path(space, K, params, threads, FacePath::kReduced);
}

Eigen::VectorXd
assemble_rhs(const BrokenSpace& space,
             const std::function<double(double, double)>& f) {
  const Mesh& mesh = space.mesh();
  const Quadrature2D& rule = space.quad();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.num_dofs());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.elements[static_cast<std::size_t>(e)];
    const ElementTables& tab = space.tables(space.degree(e));
    const double detj = el.hx() * el.hy() / 4.0;
    double* out = b.data() + space.offset(e);
    for (int q = 0; q < tab.nq; ++q) {
      const double x =
          el.x0 + (rule.xi[static_cast<std::size_t>(q)] + 1.0) * el.hx() / 2.0;
      const double y =
          el.y0 + (rule.eta[static_cast<std::size_t>(q)] + 1.0) * el.hy() / 2.0;
      const double w = rule.w[static_cast<std::size_t>(q)] * detj;
      kernels::axpy(w * f(x, y), &tab.phi[static_cast<std::size_t>(q) * tab.nb],
                    out, static_cast<std::size_t>(tab.nb));
    }
  }
  return b;
}

FaceValues face_jump_average(const BrokenSpace& space,
                             const CoefficientField& K, const DGFunction& u,
                             int face, int quad_point) {
  const Mesh& mesh = space.mesh();
  if (face < 0 ||
      face >= static_cast<int>(mesh.interior_faces.size())) {
    throw invalid_input(
        "face_jump_average: not an interior face (boundary faces have no "
        "two-sided trace)");
  }
  const InteriorFace& f = mesh.interior_faces[static_cast<std::size_t>(face)];
  const TraceTable to = detail::trace_table(space, K, f.owner, f.owner_edge,
                                            f.normal[0], f.normal[1]);
  const TraceTable tn = detail::trace_table(space, K, f.neighbor,
                                            f.neighbor_edge, f.normal[0],
                                            f.normal[1]);
  if (quad_point < 0 || quad_point >= to.nq) {
    throw invalid_input("face_jump_average: quadrature point out of range");
  }
  auto side_values = [&u, &space, quad_point](const TraceTable& t, int element,
                                              double& val, double& flx) {
    const std::size_t r = static_cast<std::size_t>(quad_point) * t.nb;
    const double* c = u.coeffs.data() + space.offset(element);
    val = kernels::dot(c, &t.phi[r], static_cast<std::size_t>(t.nb));
    flx = kernels::dot(c, &t.flux[r], static_cast<std::size_t>(t.nb));
  };
  double uo, fo, un, fn;
  side_values(to, f.owner, uo, fo);
  side_values(tn, f.neighbor, un, fn);
  FaceValues v;
  v.jump_u = uo - un;
  v.avg_u = 0.5 * (uo + un);
  v.jump_flux = fo - fn;
  v.avg_flux = 0.5 * (fo + fn);
  return v;
}

AssembledSystem assemble_system(const BrokenSpace& space,
                                const CoefficientField& K,
                                const PenaltyParams& params,
                                const std::function<double(double, double)>& f,
                                int threads) {
  AssembledSystem sys;
  sys.B = assemble_direct(space, K, params, threads);
  sys.rhs = assemble_rhs(space, f);
  sys.params = params;
  sys.h = space.mesh().h;
  sys.p = space.min_degree();
  std::uint64_t fp = space.fingerprint();
  fp = fnv1a(params.fingerprint(), fp);
  fp = fnv1a(K.describe(), fp);
  sys.fingerprint = fp;
  return sys;
}

void dump_triplets(const SparseMat& m, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (fp == nullptr) {
    throw invalid_input("dump_triplets: cannot open " + path);
  }
  std::fprintf(fp, "# %ld %ld %ld\n", static_cast<long>(m.rows()),
               static_cast<long>(m.cols()), static_cast<long>(m.nonZeros()));
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(m, k); it; ++it) {
      std::fprintf(fp, "%ld %ld %.17g\n", static_cast<long>(it.row()),
                   static_cast<long>(it.col()), it.value());
    }
  }
  std::fclose(fp);
}

void dump_vector(const Eigen::VectorXd& v, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (fp == nullptr) {
    throw invalid_input("dump_vector: cannot open " + path);
  }
  std::fprintf(fp, "# %ld\n", static_cast<long>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::fprintf(fp, "%.17g\n", v[i]);
  }
  std::fclose(fp);
}

} // namespace dgrd
