#include "trussopt/service/advisor.hpp"

#include <cmath>

namespace trussopt::advisor {

namespace {

struct Builder {
  TrussModel m;

  int node(double x, double y, Support s = Support::free) {
    Node n;
    n.id = int(m.nodes.size()) + 1;
    n.x = x;
    n.y = y;
    n.support = s;
    m.nodes.push_back(n);
    return n.id;
  }
  void bar(int a, int b) {
    Member mem;
    mem.id = int(m.members.size()) + 1;
    mem.node_i = a;
    mem.node_j = b;
    m.members.push_back(mem);
  }
  void load(int id) { m.nodes[std::size_t(id - 1)].load(LoadCase::dl) = {0.0, -1.0}; }
  TrussModel finish() {
    m.materials.push_back(Material{});
    m.sections.push_back(CrossSection{});
    m.combinations = default_combinations();
    return std::move(m);
  }
};

void check(double span, double height) {
  if (!(span > 0) || !std::isfinite(span)) throw AdvisorError("span must be positive");
  if (!(height > 0) || !std::isfinite(height)) throw AdvisorError("height must be positive");
}

int even_panels(int panels) { return std::max(2, panels + panels % 2); }

// Bottom chord 0..n, pitched top chord over the interior bottom nodes.
struct Pitched {
  Builder b;
  std::vector<int> bottom, top;  // top[i] sits over bottom[i]; ends are the supports

  Pitched(double span, double height, int n) {
    for (int i = 0; i <= n; ++i)
      bottom.push_back(b.node(span * i / n, 0.0, i == 0 ? Support::hinged : i == n ? Support::roller_y : Support::free));
    top.push_back(bottom.front());
    for (int i = 1; i < n; ++i) {
      const double x = span * i / n;
      top.push_back(b.node(x, height * (1 - std::abs(2 * x / span - 1))));
      b.load(top.back());
    }
    top.push_back(bottom.back());
    for (int i = 0; i < n; ++i) b.bar(bottom[std::size_t(i)], bottom[std::size_t(i) + 1]);
  }
};

// Pratt diagonals fall toward midspan, Howe diagonals rise toward it.
TrussModel pitched(double span, double height, int panels, bool howe, bool compound) {
  check(span, height);
  const int n = even_panels(panels);
  Pitched p(span, height, n);
  auto T = [&](int i) { return p.top[std::size_t(i)]; };
  auto B = [&](int i) { return p.bottom[std::size_t(i)]; };
  for (int i = 0; i < n; ++i) {
    if (!compound) {
      p.b.bar(T(i), T(i + 1));
      continue;
    }
    // split the segment and strut the midpoint to the bottom node under its inner end
    const Node a = p.b.m.nodes[std::size_t(T(i) - 1)], c = p.b.m.nodes[std::size_t(T(i + 1) - 1)];
    const int mid = p.b.node((a.x + c.x) / 2, (a.y + c.y) / 2);
    p.b.load(mid);
    p.b.bar(T(i), mid);
    p.b.bar(mid, T(i + 1));
    p.b.bar(mid, i < n / 2 ? B(i + 1) : B(i));
  }
  for (int i = 1; i < n; ++i) p.b.bar(B(i), T(i));
  for (int i = 1; i < n / 2; ++i) {
    if (howe) p.b.bar(B(i), T(i + 1));
    else p.b.bar(T(i), B(i + 1));
  }
  for (int i = n / 2 + 1; i < n; ++i) {
    if (howe) p.b.bar(B(i), T(i - 1));
    else p.b.bar(T(i), B(i - 1));
  }
  return p.b.finish();
}

}  // namespace

TrussModel fink(double span, double height) {
  check(span, height);
  Builder b;
  const int b0 = b.node(0, 0, Support::hinged), b1 = b.node(span / 3, 0), b2 = b.node(2 * span / 3, 0),
            b3 = b.node(span, 0, Support::roller_y);
  const int t1 = b.node(span / 4, height / 2), t2 = b.node(span / 2, height), t3 = b.node(3 * span / 4, height / 2);
  for (int t : {t1, t2, t3}) b.load(t);
  const int conn[11][2] = {{b0, b1}, {b1, b2}, {b2, b3}, {b0, t1}, {t1, t2}, {t1, b1},
                           {b1, t2}, {t2, t3}, {t2, b2}, {b2, t3}, {t3, b3}};
  for (const auto& c : conn) b.bar(c[0], c[1]);
  return b.finish();
}

TrussModel pratt(double span, double height, int panels) { return pitched(span, height, panels, false, false); }
TrussModel howe(double span, double height, int panels) { return pitched(span, height, panels, true, false); }
TrussModel compound_pratt(double span, double height, int panels) {
  return pitched(span, height, panels, false, true);
}

TrussModel warren_verticals(double span, double height, int panels) {
  check(span, height);
  const int n = std::max(2, panels);
  Builder b;
  std::vector<int> bot, top;
  for (int i = 0; i <= n; ++i)
    bot.push_back(b.node(span * i / n, 0.0, i == 0 ? Support::hinged : i == n ? Support::roller_y : Support::free));
  for (int i = 0; i <= n; ++i) {
    top.push_back(b.node(span * i / n, height));
    b.load(top.back());
  }
  for (int i = 0; i < n; ++i) {
    b.bar(bot[std::size_t(i)], bot[std::size_t(i) + 1]);
    b.bar(top[std::size_t(i)], top[std::size_t(i) + 1]);
  }
  for (int i = 0; i <= n; ++i) b.bar(bot[std::size_t(i)], top[std::size_t(i)]);
  for (int i = 0; i < n; ++i) {
    if (i % 2 == 0) b.bar(bot[std::size_t(i)], top[std::size_t(i) + 1]);
    else b.bar(top[std::size_t(i)], bot[std::size_t(i) + 1]);
  }
  return b.finish();
}

std::vector<Suggestion> advise(double span) {
  if (!(span > 0) || !std::isfinite(span)) throw AdvisorError("span must be positive");
  if (span > 500) throw AdvisorError("span above 500 m is outside the advisor's range");
  const int panels = std::max(1, int(std::ceil(span / 2.0 - 1e-9)));
  const double h = span / 6.0;
  std::vector<Suggestion> out;
  auto add = [&](std::string type, TrussModel m) {
    int bottom = 0;
    for (const auto& n : m.nodes) bottom += n.y == 0.0;
    out.push_back({std::move(type), span, h, bottom - 1, std::move(m)});
  };
  if (span <= 10) {
    add("fink", fink(span, h));
    add("pratt", pratt(span, h, panels));
    add("howe", howe(span, h, panels));
  } else if (span <= 20) {
    add("pratt", pratt(span, h, panels));
    add("warren_verticals", warren_verticals(span, h, panels));
  } else {
    add("compound_pratt", compound_pratt(span, h, panels));
  }
  return out;
}

}  // namespace trussopt::advisor
