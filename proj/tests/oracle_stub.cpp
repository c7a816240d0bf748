// Child-process stub speaking the external-oracle line protocol; the mode
// argument selects well-behaved and misbehaving personalities for the tests.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

struct Request {
  std::size_t n = 0;
  std::vector<double> costs;
  std::vector<std::pair<std::size_t, int>> fixings;
};

Request read_request() {
  Request req;
  std::size_t m_fix = 0;
  std::cin >> req.n >> m_fix;
  req.costs.resize(req.n);
  for (double& c : req.costs) std::cin >> c;
  req.fixings.resize(m_fix);
  for (auto& [idx, val] : req.fixings) std::cin >> idx >> val;
  return req;
}

void print_bits(const std::vector<int>& bits) {
  for (std::size_t i = 0; i < bits.size(); ++i)
    std::cout << (i ? " " : "") << bits[i];
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "fixed";

  if (mode == "timeout") {
    read_request();
    std::this_thread::sleep_for(std::chrono::seconds(30));
    return 0;
  }

  const Request req = read_request();

  if (mode == "fixed") {
    // argv[2] holds the bits as a comma list, e.g. "1,1,0".
    std::vector<int> bits;
    std::stringstream ss(argc > 2 ? argv[2] : "");
    std::string tok;
    while (std::getline(ss, tok, ',')) bits.push_back(std::stoi(tok));
    print_bits(bits);
  } else if (mode == "violate") {
    // Return a vector contradicting the first fixing (or all zeros).
    std::vector<int> bits(req.n, 0);
    if (!req.fixings.empty())
      bits[req.fixings[0].first] = 1 - req.fixings[0].second;
    print_bits(bits);
  } else if (mode == "infeasible") {
    std::cout << "INFEASIBLE\n";
  } else if (mode == "garbage") {
    std::cout << "hello world\n";
  } else if (mode == "kruskal3") {
    // MST of K3 = the two cheapest edges (ties by index), ignoring fixings.
    std::vector<std::size_t> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (req.costs[a] != req.costs[b]) return req.costs[a] < req.costs[b];
      return a < b;
    });
    std::vector<int> bits(3, 0);
    bits[order[0]] = 1;
    bits[order[1]] = 1;
    print_bits(bits);
  } else {
    std::cerr << "unknown stub mode\n";
    return 2;
  }
  return 0;
}
