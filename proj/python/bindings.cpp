#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <memory>

#include "vlq/dataset.hpp"
#include "vlq/eval.hpp"
#include "vlq/index.hpp"
#include "vlq/line_quant.hpp"
#include "vlq/parallel.hpp"
#include "vlq/search.hpp"
#include "vlq/vecs_io.hpp"

namespace py = pybind11;
using namespace vlq;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

VectorSet to_vecset(const FloatArray& arr) {
    if (arr.ndim() != 2) {
        throw std::runtime_error("expected a 2-D float array");
    }
    VectorSet set((uint32_t)arr.shape(1), (size_t)arr.shape(0));
    std::memcpy(set.data.data(), arr.data(), set.data.size() * sizeof(float));
    set.validate();
    return set;
}

py::array_t<float> from_vecset(const VectorSet& set) {
    py::array_t<float> arr({(py::ssize_t)set.count(), (py::ssize_t)set.dim});
    std::memcpy(arr.mutable_data(), set.data.data(),
                set.data.size() * sizeof(float));
    return arr;
}

// Trained model plus (optionally) the encoded base set.
struct PyIndex {
    InvertedIndex index;

    static PyIndex train(
            const FloatArray& train_arr,
            uint32_t k,
            uint32_t n,
            uint32_t m,
            uint32_t iters,
            uint64_t seed,
            bool clamp_lambda) {
        VectorSet train = to_vecset(train_arr);
        py::gil_scoped_release release;
        if (m == 0 || train.dim % m != 0) {
            throw std::runtime_error("m must divide the vector dimension");
        }
        Codebook cb = train_kmeans(train, k, iters, seed);
        NeighborGraph graph = build_nn_graph(cb, n);
        VectorSet disp(train.dim, train.count());
        for (size_t i = 0; i < train.count(); i++) {
            const float* x = train.row(i);
            EdgeAssignment ea = assign_edge(
                    x, assign_nearest(x, cb).first, cb, graph, clamp_lambda);
            const float* ci = cb.centroid(ea.centroid_id);
            const float* sj =
                    cb.centroid(graph.neighbor(ea.centroid_id, ea.edge_rank));
            for (uint32_t t = 0; t < train.dim; t++) {
                disp.row(i)[t] = x[t] -
                        ((1.0f - ea.lambda) * ci[t] + ea.lambda * sj[t]);
            }
        }
        PQCodebooks pq = train_pq(disp, m, iters, seed + 1);
        PyIndex result;
        result.index.codebook = std::move(cb);
        result.index.graph = std::move(graph);
        result.index.pq = std::move(pq);
        result.index.clamp_lambda = clamp_lambda;
        result.index.lists.resize((size_t)result.index.k() * result.index.n());
        result.index.t3 = compute_t3(result.index.codebook, result.index.pq);
        return result;
    }

    void add(const FloatArray& base_arr) {
        VectorSet base = to_vecset(base_arr);
        py::gil_scoped_release release;
        if (index.base_count != 0) {
            throw std::runtime_error("index already holds a base set");
        }
        LambdaQuant q = index.lambda_quant;
        if (!index.clamp_lambda) {
            q = observe_lambda_range(base, index.codebook, index.graph);
        }
        InvertedIndex built = build_index(
                base, index.codebook, index.graph, index.pq, q,
                index.clamp_lambda);
        index = std::move(built);
    }

    py::tuple search(
            const FloatArray& query_arr,
            uint32_t w1,
            float alpha,
            uint32_t top_k) {
        VectorSet queries = to_vecset(query_arr);
        std::vector<SearchResult> results;
        {
            py::gil_scoped_release release;
            QueryParams params{w1, alpha, top_k};
            results = search_batch(index, queries, params);
        }
        py::ssize_t nq = (py::ssize_t)results.size();
        py::array_t<int64_t> ids({nq, (py::ssize_t)top_k});
        py::array_t<float> dists({nq, (py::ssize_t)top_k});
        auto id_view = ids.mutable_unchecked<2>();
        auto dist_view = dists.mutable_unchecked<2>();
        for (py::ssize_t q = 0; q < nq; q++) {
            for (uint32_t j = 0; j < top_k; j++) {
                // pad with -1 / inf when fewer candidates exist
                bool have = j < results[q].ids.size();
                id_view(q, j) = have ? (int64_t)results[q].ids[j] : -1;
                dist_view(q, j) = have ? results[q].dists[j]
                                       : std::numeric_limits<float>::infinity();
            }
        }
        return py::make_tuple(ids, dists);
    }

    void save(const std::string& path) const {
        py::gil_scoped_release release;
        serialize_index(index, path);
    }

    static PyIndex load(const std::string& path) {
        py::gil_scoped_release release;
        PyIndex result;
        result.index = deserialize_index(path);
        return result;
    }
};

} // namespace

PYBIND11_MODULE(_vlqadc, mod) {
    mod.doc() = "Two-level (vector + line quantization) ANN index";

    mod.def(
            "set_max_threads", &set_max_threads, py::arg("threads"),
            "Caps the worker thread count (0 restores the hardware default).");

    mod.def(
            "gen_synthetic",
            [](size_t count, uint32_t dim, uint32_t clusters, float spread,
               uint64_t seed) {
                VectorSet set;
                {
                    py::gil_scoped_release release;
                    set = gen_synthetic(count, dim, clusters, spread, seed);
                }
                return from_vecset(set);
            },
            py::arg("count"), py::arg("dim"), py::arg("clusters") = 200,
            py::arg("spread") = 0.05f, py::arg("seed") = 42,
            "Clustered Gaussian test data, deterministic in the seed.");

    mod.def(
            "brute_force_gt",
            [](const FloatArray& base_arr, const FloatArray& query_arr,
               uint32_t k) {
                VectorSet base = to_vecset(base_arr);
                VectorSet queries = to_vecset(query_arr);
                GroundTruth gt;
                {
                    py::gil_scoped_release release;
                    gt = brute_force_gt(base, queries, k);
                }
                py::array_t<uint32_t> arr(
                        {(py::ssize_t)queries.count(), (py::ssize_t)k});
                std::memcpy(arr.mutable_data(), gt.ids.data(),
                            gt.ids.size() * sizeof(uint32_t));
                return arr;
            },
            py::arg("base"), py::arg("queries"), py::arg("k"),
            "Exact k-NN ids per query, ties broken by ascending id.");

    mod.def(
            "read_vecs",
            [](const std::string& path) {
                VectorSet set;
                {
                    py::gil_scoped_release release;
                    set = read_vecs(path, vecs_kind_from_path(path));
                }
                return from_vecset(set);
            },
            py::arg("path"),
            "Reads .fvecs/.bvecs/.ivecs; byte and int payloads widen to float.");

    mod.def(
            "write_vecs",
            [](const FloatArray& arr, const std::string& path) {
                VectorSet set = to_vecset(arr);
                py::gil_scoped_release release;
                write_vecs(set, path, vecs_kind_from_path(path));
            },
            py::arg("array"), py::arg("path"));

    py::class_<PyIndex>(mod, "Index")
            .def_static(
                    "train", &PyIndex::train, py::arg("train"), py::arg("k") = 1024,
                    py::arg("n") = 16, py::arg("m") = 8, py::arg("iters") = 10,
                    py::arg("seed") = 42, py::arg("clamp_lambda") = true,
                    "Learns the centroid codebook, neighbor graph and PQ "
                    "codebooks from a training set.")
            .def_static("load", &PyIndex::load, py::arg("path"))
            .def("add", &PyIndex::add, py::arg("base"),
                 "Encodes and stores a base set (ids are the row numbers).")
            .def("search", &PyIndex::search, py::arg("queries"),
                 py::arg("w1") = 64, py::arg("alpha") = 0.25f, py::arg("k") = 10,
                 "Returns (ids, distances) arrays of shape (nq, k); unfilled "
                 "slots hold -1 / inf.")
            .def("save", &PyIndex::save, py::arg("path"))
            .def_property_readonly(
                    "k", [](const PyIndex& s) { return s.index.k(); })
            .def_property_readonly(
                    "n", [](const PyIndex& s) { return s.index.n(); })
            .def_property_readonly(
                    "m", [](const PyIndex& s) { return s.index.m(); })
            .def_property_readonly(
                    "dim", [](const PyIndex& s) { return s.index.dim(); })
            .def_property_readonly(
                    "ntotal",
                    [](const PyIndex& s) { return s.index.base_count; });
}
