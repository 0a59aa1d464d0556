/** Thin typed client over the annotation JSON API. */
/** The server answered with a non-2xx status. */
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
        this.name = "ApiError";
    }
}
/** The request never produced a server response (offline, dropped, ...). */
export class NetworkError extends Error {
    constructor(cause) {
        super(`network failure: ${String(cause)}`);
        this.name = "NetworkError";
    }
}
export class ApiClient {
    baseUrl;
    fetchImpl;
    token;
    constructor(baseUrl, options = {}) {
        this.baseUrl = baseUrl;
        this.fetchImpl = options.fetchImpl ?? ((url, init) => fetch(url, init));
        this.token = options.token;
    }
    async request(path, init) {
        const headers = { ...init?.headers };
        if (this.token)
            headers["X-Auth-Token"] = this.token;
        let response;
        try {
            response = await this.fetchImpl(this.baseUrl + path, { ...init, headers });
        }
        catch (cause) {
            throw new NetworkError(cause);
        }
        const text = await response.text();
        if (!response.ok) {
            let message = text;
            try {
                message = JSON.parse(text).error ?? text;
            }
            catch {
                /* non-JSON error body; keep raw text */
            }
            throw new ApiError(response.status, message);
        }
        return JSON.parse(text);
    }
    nextPairs(annotator, opts = {}) {
        const params = new URLSearchParams({
            annotator,
            state: "unlabeled",
            limit: String(opts.limit ?? 1),
        });
        if (opts.app)
            params.set("app", opts.app);
        if (opts.inIntersectionOnly)
            params.set("in_intersection", "true");
        return this.request(`/api/pairs?${params.toString()}`);
    }
    getPair(pairId) {
        return this.request(`/api/pairs/${encodeURIComponent(pairId)}`);
    }
    submitLabel(label) {
        return this.request("/api/labels", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(label),
        });
    }
    progress() {
        return this.request("/api/progress");
    }
    agreement(a, b) {
        const params = new URLSearchParams();
        if (a)
            params.set("a", a);
        if (b)
            params.set("b", b);
        const query = params.toString();
        return this.request(`/api/agreement${query ? "?" + query : ""}`);
    }
    async exportLabels() {
        let response;
        try {
            response = await this.fetchImpl(this.baseUrl + "/api/export", {
                headers: this.token ? { "X-Auth-Token": this.token } : undefined,
            });
        }
        catch (cause) {
            throw new NetworkError(cause);
        }
        if (!response.ok)
            throw new ApiError(response.status, await response.text());
        return response.text();
    }
}
