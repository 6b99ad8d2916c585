#include "glearn/graph.hpp"

#include "glearn/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace glearn {

Graph::Graph(Matrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols())
    throw InvalidArgument("adjacency must be square");
  if (adjacency_.rows() < 1) throw InvalidArgument("graph needs at least one node");
  const auto n = adjacency_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) throw InvalidArgument(fmt::format("self-loop at node {}", i));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = adjacency_(i, j);
      if (!std::isfinite(a) || a < 0.0)
        throw InvalidArgument(fmt::format("invalid weight {} at ({}, {})", a, i, j));
      if (a != adjacency_(j, i)) throw InvalidArgument(fmt::format("asymmetric at ({}, {})", i, j));
    }
  }
}

Graph Graph::empty(int n_nodes) { return Graph(Matrix::Zero(n_nodes, n_nodes)); }

int Graph::edge_count() const {
  int count = 0;
  for (int i = 0; i < n_nodes(); ++i)
    for (int j = i + 1; j < n_nodes(); ++j)
      if (adjacency_(i, j) > 0) ++count;
  return count;
}

double Graph::total_weight() const { return adjacency_.sum() / 2.0; }

bool Graph::is_connected() const {
  const int n = n_nodes();
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && adjacency_(u, v) > 0) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

Graph Graph::binarized() const {
  return Graph((adjacency_.array() > 0).cast<double>().matrix());
}

Matrix build_laplacian(const Graph& g) {
  const Matrix& a = g.adjacency();
  Matrix lap = -a;
  lap.diagonal() = a.rowwise().sum();
  return lap;
}

Matrix Spectrum::leading(int k) const {
  if (k < 1 || k > size()) throw InvalidArgument(fmt::format("bandwidth {} outside [1, {}]", k, size()));
  return vectors.leftCols(k);
}

Spectrum eigendecompose(const Matrix& laplacian) {
  if (laplacian.rows() != laplacian.cols()) throw InvalidArgument("eigendecompose: matrix not square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  // Eigen returns ascending eigenvalues already.
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

std::string LaplacianSetReport::summary() const {
  return fmt::format("trace {} ({:.3g}), row-sum {} ({:.3g}), off-diagonal {} ({:.3g}), symmetry {} ({:.3g})",
                     trace_ok ? "ok" : "FAIL", trace_violation, row_sum_ok ? "ok" : "FAIL", row_sum_violation,
                     off_diagonal_ok ? "ok" : "FAIL", off_diagonal_violation, symmetry_ok ? "ok" : "FAIL",
                     symmetry_violation);
}

LaplacianSetReport validate_in_laplacian_set(const Matrix& laplacian, int size, double tol) {
  if (laplacian.rows() != size || laplacian.cols() != size)
    throw InvalidArgument(fmt::format("expected {}x{} matrix, got {}x{}", size, size, laplacian.rows(),
                                      laplacian.cols()));
  LaplacianSetReport r;
  r.trace_violation = std::abs(laplacian.trace() - size) / size;
  r.row_sum_violation = laplacian.rowwise().sum().cwiseAbs().maxCoeff();
  Matrix off = laplacian;
  off.diagonal().setZero();
  r.off_diagonal_violation = std::max(0.0, off.maxCoeff());
  r.symmetry_violation = (laplacian - laplacian.transpose()).cwiseAbs().maxCoeff();
  r.trace_ok = r.trace_violation <= tol;
  r.row_sum_ok = r.row_sum_violation <= tol;
  r.off_diagonal_ok = r.off_diagonal_violation <= tol;
  r.symmetry_ok = r.symmetry_violation <= tol;
  return r;
}

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(fmt::format("{} = {} not in [0, 1]", name, p));
}

template <typename Draw>
Graph draw_connected(Draw&& draw, const char* model) {
  for (int attempt = 0; attempt < kConnectivityRetries; ++attempt) {
    Graph g = draw();
    if (g.is_connected()) return g;
  }
  throw ConnectivityError(
      fmt::format("{}: no connected sample after {} draws", model, kConnectivityRetries));
}

}  // namespace

Graph generate_er(int n, double p, Rng& rng) {
  if (n < 2) throw InvalidArgument("generate_er: n must be >= 2");
  check_probability(p, "p");
  return draw_connected(
      [&] {
        std::bernoulli_distribution coin(p);
        Matrix a = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (coin(rng)) a(i, j) = a(j, i) = 1.0;
        return Graph(std::move(a));
      },
      "erdos-renyi");
}

KnnSample generate_knn_with_points(int n, int k, Rng& rng) {
  if (n < 2) throw InvalidArgument("generate_knn: n must be >= 2");
  if (k < 1 || k >= n) throw InvalidArgument(fmt::format("generate_knn: k = {} not in [1, {})", k, n));
  std::vector<Eigen::Vector2d> points;
  auto draw = [&] {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    points.assign(n, Eigen::Vector2d::Zero());
    for (auto& pt : points) {
      pt.x() = unit(rng);
      pt.y() = unit(rng);
    }
    Matrix a = Matrix::Zero(n, n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
      std::iota(order.begin(), order.end(), 0);
      std::vector<double> dist(n);
      for (int j = 0; j < n; ++j) dist[j] = (points[i] - points[j]).squaredNorm();
      // Ties go to the lower node index.
      std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return dist[x] < dist[y]; });
      int taken = 0;
      for (int j : order) {
        if (j == i) continue;
        a(i, j) = a(j, i) = 1.0;
        if (++taken == k) break;
      }
    }
    return Graph(std::move(a));
  };
  Graph g = draw_connected(draw, "knn");
  return KnnSample{std::move(g), std::move(points)};
}

Graph generate_knn(int n, int k, Rng& rng) { return generate_knn_with_points(n, k, rng).graph; }

Graph generate_sbm(const std::vector<int>& sizes, double p_in, double p_out, Rng& rng) {
  check_probability(p_in, "p_in");
  check_probability(p_out, "p_out");
  if (sizes.empty()) throw InvalidArgument("generate_sbm: no blocks");
  std::vector<int> block;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    if (sizes[b] < 1) throw InvalidArgument("generate_sbm: block sizes must be positive");
    block.insert(block.end(), sizes[b], static_cast<int>(b));
  }
  const int n = static_cast<int>(block.size());
  if (n < 2) throw InvalidArgument("generate_sbm: need at least two nodes");
  return draw_connected(
      [&] {
        std::bernoulli_distribution within(p_in), across(p_out);
        Matrix a = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (block[i] == block[j] ? within(rng) : across(rng)) a(i, j) = a(j, i) = 1.0;
        return Graph(std::move(a));
      },
      "sbm");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Graph parse_edge_list(std::istream& in, int n_nodes) {
  struct Edge {
    long i, j;
    double w;
  };
  std::vector<Edge> edges;
  std::set<std::pair<long, long>> seen;
  std::string raw;
  std::size_t line_no = 0;
  bool first_content = true;
  long declared_nodes = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "# nodes=";
      if (line.starts_with(key) && !parse_number(trim(line.substr(key.size())), declared_nodes))
        throw ParseError("malformed node-count comment", line_no);
      continue;
    }
    auto fields = split_commas(line);
    const bool header_candidate = first_content;
    first_content = false;
    long i = 0, j = 0;
    if (header_candidate && !parse_number(fields[0], i)) continue;
    if (fields.size() != 3) throw ParseError(fmt::format("expected 3 fields, got {}", fields.size()), line_no);
    double w = 0;
    if (!parse_number(fields[0], i) || !parse_number(fields[1], j))
      throw ParseError("node index is not an integer", line_no);
    if (!parse_number(fields[2], w) || !std::isfinite(w)) throw ParseError("weight is not a number", line_no);
    if (i < 0 || j < 0) throw ParseError("negative node index", line_no);
    if (i == j) throw ParseError(fmt::format("self-loop on node {}", i), line_no);
    if (w < 0) throw ParseError("negative weight", line_no);
    if (!seen.emplace(std::min(i, j), std::max(i, j)).second)
      throw ParseError(fmt::format("duplicate pair ({}, {})", i, j), line_no);
    edges.push_back({i, j, w});
  }
  long n = n_nodes > 0 ? n_nodes : declared_nodes;
  if (n <= 0) {
    for (const auto& e : edges) n = std::max({n, e.i + 1, e.j + 1});
  }
  if (n <= 0) throw ParseError("edge list is empty and no node count given");
  Matrix a = Matrix::Zero(n, n);
  for (const auto& e : edges) {
    if (e.i >= n || e.j >= n)
      throw ParseError(fmt::format("index out of range for {} nodes: ({}, {})", n, e.i, e.j));
    a(e.i, e.j) = a(e.j, e.i) = e.w;
  }
  return Graph(std::move(a));
}

Graph load_edge_list(const std::filesystem::path& path, int n_nodes) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return parse_edge_list(in, n_nodes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "# nodes=" << g.n_nodes() << "\n";
  out << "i,j,weight\n";
  for (int i = 0; i < g.n_nodes(); ++i)
    for (int j = i + 1; j < g.n_nodes(); ++j)
      if (g.weight(i, j) > 0) out << fmt::format("{},{},{:.17g}\n", i, j, g.weight(i, j));
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_edge_list(g, out);
}

void write_points(const std::vector<Eigen::Vector2d>& points, std::ostream& out) {
  out << "x,y\n";
  for (const auto& p : points) out << fmt::format("{:.17g},{:.17g}\n", p.x(), p.y());
}

void save_points(const std::vector<Eigen::Vector2d>& points, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_points(points, out);
}

}  // namespace glearn
