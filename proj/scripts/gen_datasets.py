#!/usr/bin/env python3
"""Generate the bundled data assets: the 104-tool reference library, the two
cross-domain noise libraries, the four question fixtures, and the scaling plans.

Deterministic: run it twice and the outputs are byte-identical.
"""

import hashlib
import json
import os

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")

# ---------------------------------------------------------------- reference kits

KITS = [
    {
        "kit": "index",
        "applicable_tasks": "Remote sensing index calculation for vegetation, water body, building, snow/ice, fire, etc.",
        "typical_usage": "Calculate NDVI, NDWI, TVDI and other indices, results saved as .tif files",
        "tools": [
            "calculate_batch_ndvi", "calculate_batch_ndwi", "calculate_batch_ndbi",
            "calculate_batch_evi", "calculate_batch_nbr", "calculate_batch_fvc",
            "calculate_batch_wri", "calculate_batch_ndti", "calculate_batch_frp",
            "calculate_batch_ndsi", "calc_extreme_snow_loss_percentage_from_binary_map",
            "compute_tvdi",
        ],
    },
    {
        "kit": "inversion",
        "applicable_tasks": "Only for inverting physical quantities from raw bands (LST, water vapor, sea ice concentration, water turbidity, etc.)",
        "typical_usage": "Input raw bands, output physical quantity .tif files; not for statistical analysis",
        "tools": [
            "lst_single_channel", "lst_multi_channel", "split_window", "ttm_lst",
            "modis_day_night_lst", "temperature_emissivity_separation", "ATI",
            "calculate_mean_lst_by_ndvi", "calculate_max_lst_by_ndvi", "band_ratio",
            "dual_polarization_differential", "dual_frequency_diff", "multi_freq_bt",
            "chang_single_param_inversion", "nasa_team_sea_ice_concentration",
            "dual_polarization_ratio", "calculate_water_turbidity_ntu",
        ],
    },
    {
        "kit": "perception",
        "applicable_tasks": "Visual perception tasks including image segmentation, object detection, change detection, scene classification",
        "typical_usage": "Use when identifying targets or change areas in images",
        "tools": [
            "threshold_segmentation", "count_above_threshold", "count_skeleton_contours",
            "bbox_expansion", "bboxes2centroids", "centroid_distance_extremes",
            "calculate_bbox_area", "MSCN", "RemoteCLIP", "Strip_R_CNN", "SM3Det",
            "RemoteSAM", "InstructSAM", "SAM2", "ChangeOS",
        ],
    },
    {
        "kit": "analysis",
        "applicable_tasks": "Time series analysis (trend, change points, seasonal decomposition, hotspot spatial analysis)",
        "typical_usage": "Input numeric sequences for trend/change point/seasonality analysis; input rasters for spatial hotspot analysis",
        "tools": [
            "compute_linear_trend", "mann_kendall_test", "sens_slope", "stl_decompose",
            "detect_change_points", "autocorrelation_function", "detect_seasonality_acf",
            "count_spikes_from_values", "getis_ord_gi_star", "analyze_hotspot_direction",
        ],
    },
    {
        "kit": "statistics",
        "applicable_tasks": "First choice for area/pixel percentage calculation; image statistics, math operations, temperature conversion, fire analysis",
        "typical_usage": "Use calculate_threshold_ratio for above-threshold pixel percentage; use calc_batch_image_mean for batch mean values",
        "tools": [
            "calc_batch_image_mean", "calc_batch_image_std", "calc_batch_image_median",
            "calc_batch_image_min", "calc_batch_image_max", "calc_batch_image_skewness",
            "calc_batch_image_kurtosis", "calc_batch_image_sum",
            "calc_batch_image_hotspot_percentage", "calc_batch_image_hotspot_tif",
            "calc_batch_image_mean_mean", "calc_batch_image_mean_max",
            "calc_batch_image_mean_max_min", "calc_batch_image_mean_threshold",
            "difference", "division", "multiply", "subtract", "percentage_change",
            "ceil_number", "mean", "max_value_and_index", "min_value_and_index",
            "get_list_object_via_indexes", "kelvin_to_celsius", "celsius_to_kelvin",
            "calc_batch_fire_pixels", "create_fire_increase_map",
            "identify_fire_prone_areas", "get_percentile_value_from_image",
            "calculate_area", "calculate_threshold_ratio",
            "calculate_multi_band_threshold_ratio", "count_pixels_satisfying_conditions",
            "count_images_exceeding_threshold_ratio", "average_ratio_exceeding_threshold",
            "count_images_exceeding_mean_multiplier", "calculate_band_mean_by_condition",
            "calc_threshold_value_mean", "coefficient_of_variation", "skewness",
            "kurtosis", "image_division_mean", "calculate_intersection_percentage",
            "calculate_tif_average", "calculate_tif_difference", "grayscale_to_colormap",
            "get_filelist", "radiometric_correction_sr", "apply_cloud_mask",
        ],
    },
]

ACRONYMS = {
    "ndvi": "normalized difference vegetation index",
    "ndwi": "normalized difference water index",
    "ndbi": "normalized difference built-up index",
    "evi": "enhanced vegetation index",
    "nbr": "normalized burn ratio",
    "fvc": "fractional vegetation cover",
    "wri": "water ratio index",
    "ndti": "normalized difference turbidity index",
    "frp": "fire radiative power",
    "ndsi": "normalized difference snow index",
    "tvdi": "temperature vegetation dryness index",
    "lst": "land surface temperature",
    "ttm": "two-temperature method",
    "modis": "MODIS",
    "ati": "apparent thermal inertia",
    "bt": "brightness temperature",
    "ntu": "nephelometric turbidity units",
    "acf": "autocorrelation function",
    "stl": "seasonal-trend decomposition",
    "mscn": "mean-subtracted contrast-normalized coefficients",
    "sr": "surface reflectance",
    "calc": "calculate",
    "tif": "GeoTIFF",
    "gi": "Gi",
}

# Per-tool pinned descriptions and parameter schemas for every tool the bundled
# fixtures exercise; argument names here must match the fixture trajectories.
PINNED = {
    "get_filelist": {
        "brief": "List the data files available under a workspace directory prefix.",
        "doc": ("Returns the newline-separated listing of every data file registered under the "
                "supplied path prefix, sorted lexicographically. Call it before any file-based "
                "computation so that subsequent calls reference exact on-disk filenames instead "
                "of guessed ones. An empty listing means the prefix holds no files."),
        "params": [("path", "string", True)],
    },
    "ATI": {
        "brief": "Invert apparent thermal inertia from one surface albedo raster and one brightness temperature raster.",
        "doc": ("Runs the apparent thermal inertia inversion for a single acquisition date. "
                "Supply the surface albedo raster through albedo_path and the co-registered "
                "brightness temperature raster through bt_path; both must be single-band "
                "GeoTIFF files covering the same footprint. The inversion writes one output "
                "raster per call and reports it as Result saved at <path>. Use the returned "
                "path verbatim in any follow-up computation."),
        "params": [("albedo_path", "string", True), ("bt_path", "string", True)],
    },
    "split_window": {
        "brief": "Retrieve land surface temperature from thermal band 31 and band 32 with the split-window algorithm.",
        "doc": ("Applies the split-window land surface temperature algorithm to a pair of "
                "thermal infrared rasters. Pass the band 31 brightness temperature file as "
                "band31_path and the band 32 file as band32_path; filenames must match the "
                "workspace listing exactly. The retrieved temperature raster is written in "
                "kelvin and announced as Result saved at <path>."),
        "params": [("band31_path", "string", True), ("band32_path", "string", True)],
    },
    "band_ratio": {
        "brief": "Estimate columnar atmospheric water vapor from MODIS near-infrared band ratios for one acquisition.",
        "doc": ("Computes precipitable water vapor for a single acquisition using the "
                "near-infrared band ratio method. Provide the five surface reflectance rasters "
                "through b02_path, b05_path, b17_path, b18_path and b19_path; all five must "
                "come from the same overpass. The retrieval writes a water vapor raster in "
                "g/cm2 and reports it as Result saved at <path>."),
        "params": [("b02_path", "string", True), ("b05_path", "string", True),
                   ("b17_path", "string", True), ("b18_path", "string", True),
                   ("b19_path", "string", True)],
    },
    "calculate_batch_ndti": {
        "brief": "Compute the normalized difference turbidity index for every scene in a batch of reflectance rasters.",
        "doc": ("Runs the normalized difference turbidity index over each reflectance scene "
                "named in file_list. Every input must contain the red and green bands required "
                "by the index. One turbidity raster is produced per input scene; the call "
                "reports each product as Result saved at <path> and the outputs keep the batch "
                "order of the inputs."),
        "params": [("file_list", "array", True)],
    },
    "calc_batch_image_mean": {
        "brief": "Compute the per-image mean pixel value for each raster in a batch.",
        "doc": ("Evaluates the arithmetic mean of the valid pixels of every raster listed in "
                "image_paths and returns the list of means in input order. Nodata pixels are "
                "excluded from each mean. Use it to reduce a batch of result rasters to one "
                "scalar per image before sequence-level statistics."),
        "params": [("image_paths", "array", True)],
    },
    "calc_batch_image_mean_mean": {
        "brief": "Reduce a batch of rasters to the single mean of their per-image means.",
        "doc": ("Computes the per-image mean of every raster listed in image_paths and then "
                "averages those means into one scalar. The reduction weights every image "
                "equally regardless of pixel count. Returns the final scalar directly in the "
                "call response."),
        "params": [("image_paths", "array", True)],
    },
    "mean": {
        "brief": "Average a list of numbers into a single scalar value.",
        "doc": ("Returns the arithmetic mean of the numeric sequence supplied through values. "
                "The list must be non-empty; non-numeric entries are rejected. Use it for "
                "final aggregation once earlier raster steps have produced scalar series."),
        "params": [("values", "array", True)],
    },
    "calculate_threshold_ratio": {
        "brief": "Compute the percentage of pixels beyond a threshold across one or more rasters.",
        "doc": ("Counts the pixels satisfying the threshold test across every raster listed in "
                "image_paths and reports the percentage relative to all valid pixels. Set "
                "threshold to the cut value and mode to above or below to pick the side of the "
                "comparison; the default mode is above. The percentage is returned directly in "
                "the call response."),
        "params": [("image_paths", "array", True), ("threshold", "number", True),
                   ("mode", "string", False)],
    },
}


def stable_pick(name, salt, options):
    digest = hashlib.sha1((salt + ":" + name).encode()).hexdigest()
    return options[int(digest, 16) % len(options)]


def words_from_name(name):
    parts = []
    for raw in name.split("_"):
        low = raw.lower()
        if low in ACRONYMS:
            parts.append(ACRONYMS[low])
        elif raw.isupper() or any(c.isdigit() for c in raw):
            parts.append(raw)
        else:
            parts.append(low)
    return " ".join(parts)


BRIEF_TEMPLATES = [
    "Run the {phrase} operation over the supplied remote sensing inputs.",
    "Compute {phrase} results from the given input files or values.",
    "Apply {phrase} processing and report the derived quantities.",
    "Evaluate {phrase} over the provided inputs and return the outcome.",
]

DOC_BODIES = [
    ("Executes the {phrase} routine against the declared inputs. Inputs are validated "
     "before processing and mismatched rasters are rejected with a descriptive error. "
     "Raster products are written next to the inputs and announced as Result saved at "
     "<path>; scalar products are returned directly in the call response. Always reuse "
     "returned paths verbatim in later calls."),
    ("Performs {phrase} over the request arguments. File inputs must name existing "
     "workspace entries exactly as reported by the file listing. When the routine emits "
     "rasters it reports each one as Result saved at <path>; numeric summaries come back "
     "inline. Invalid or missing arguments terminate the call with an error message "
     "instead of partial output."),
    ("Carries out the {phrase} computation step. The routine consumes the arguments "
     "described below, checks file existence and band compatibility, then runs the "
     "processing kernel. Outputs follow the standard convention: derived rasters are "
     "reported as Result saved at <path>, while scalar metrics are embedded in the "
     "response text for direct use."),
]

GENERIC_PARAMS = {
    "batch_files": [("file_list", "array", True)],
    "image_batch": [("image_paths", "array", True)],
    "single_image": [("image_path", "string", True)],
    "image_pair": [("image_path_a", "string", True), ("image_path_b", "string", True)],
    "values": [("values", "array", True)],
    "two_numbers": [("value_a", "number", True), ("value_b", "number", True)],
    "number": [("value", "number", True)],
    "detector": [("image_path", "string", True), ("prompt", "string", False)],
    "threshold_image": [("image_path", "string", True), ("threshold", "number", True)],
    "series": [("values", "array", True), ("period", "integer", False)],
}


def infer_params(name):
    if name in PINNED:
        return PINNED[name]["params"]
    if name.startswith("calculate_batch_") or name in ("calc_batch_fire_pixels",):
        return GENERIC_PARAMS["batch_files"]
    if name.startswith("calc_batch_image_"):
        return GENERIC_PARAMS["image_batch"]
    if name in ("difference", "division", "multiply", "subtract", "percentage_change"):
        return GENERIC_PARAMS["two_numbers"]
    if name in ("ceil_number", "kelvin_to_celsius", "celsius_to_kelvin"):
        return GENERIC_PARAMS["number"]
    if name in ("max_value_and_index", "min_value_and_index", "skewness", "kurtosis",
                "coefficient_of_variation", "count_spikes_from_values"):
        return GENERIC_PARAMS["values"]
    if name == "get_list_object_via_indexes":
        return [("values", "array", True), ("indexes", "array", True)]
    if name in ("compute_linear_trend", "mann_kendall_test", "sens_slope",
                "stl_decompose", "detect_change_points", "autocorrelation_function",
                "detect_seasonality_acf"):
        return GENERIC_PARAMS["series"]
    if name in ("getis_ord_gi_star", "analyze_hotspot_direction"):
        return GENERIC_PARAMS["image_batch"]
    if name in ("threshold_segmentation", "count_above_threshold"):
        return GENERIC_PARAMS["threshold_image"]
    if name in ("RemoteCLIP", "Strip_R_CNN", "SM3Det", "RemoteSAM", "InstructSAM",
                "SAM2", "ChangeOS", "MSCN"):
        return GENERIC_PARAMS["detector"]
    if name in ("bbox_expansion", "bboxes2centroids", "centroid_distance_extremes",
                "calculate_bbox_area"):
        return [("bboxes", "array", True)]
    if name in ("calculate_tif_average", "calculate_tif_difference",
                "image_division_mean", "calculate_intersection_percentage",
                "create_fire_increase_map"):
        return GENERIC_PARAMS["image_pair"]
    if name in ("calculate_multi_band_threshold_ratio",):
        return [("image_path", "string", True), ("band_rules", "array", True),
                ("output_path", "string", True)]
    if name in ("count_pixels_satisfying_conditions", "calculate_band_mean_by_condition"):
        return [("image_path", "string", True), ("condition", "string", True)]
    if name in ("count_images_exceeding_threshold_ratio", "average_ratio_exceeding_threshold",
                "count_images_exceeding_mean_multiplier", "calc_threshold_value_mean",
                "calc_batch_image_mean_threshold"):
        return [("image_paths", "array", True), ("threshold", "number", True)]
    if name in ("get_percentile_value_from_image",):
        return [("image_path", "string", True), ("percentile", "number", True)]
    if name in ("calculate_area", "count_skeleton_contours", "grayscale_to_colormap",
                "calc_extreme_snow_loss_percentage_from_binary_map"):
        return GENERIC_PARAMS["single_image"]
    if name in ("radiometric_correction_sr", "apply_cloud_mask"):
        return GENERIC_PARAMS["batch_files"]
    if name in ("compute_tvdi", "identify_fire_prone_areas"):
        return GENERIC_PARAMS["image_batch"]
    # inversion kit and anything left: band-style file inputs
    return [("input_paths", "array", True)]


def make_tool(name, salt):
    phrase = words_from_name(name)
    if name in PINNED:
        brief, doc = PINNED[name]["brief"], PINNED[name]["doc"]
    else:
        brief = stable_pick(name, salt + "b", BRIEF_TEMPLATES).format(phrase=phrase)
        doc = stable_pick(name, salt + "d", DOC_BODIES).format(phrase=phrase)
    params = [{"name": p, "type": t, "required": r} for (p, t, r) in infer_params(name)]
    return {"name": name, "brief": brief, "document": doc, "params": params}


def reference_tree():
    return {"kits": [
        {"kit": k["kit"], "applicable_tasks": k["applicable_tasks"],
         "typical_usage": k["typical_usage"],
         "tools": [make_tool(n, "ref") for n in k["tools"]]}
        for k in KITS
    ]}


# ---------------------------------------------------------------- noise libraries

NOISE_STAGE1 = [
    ("accounts",
     "Account management: registration, authentication, sessions, API keys, account lifecycle",
     "Use for user identity and credential workflows; not for data analysis",
     ["register_account", "verify_identity", "login_session", "logout_session",
      "reset_password", "update_profile", "delete_account", "list_sessions",
      "revoke_token", "issue_api_key", "rotate_api_key", "enable_two_factor",
      "disable_two_factor", "get_login_history", "lock_account", "unlock_account",
      "merge_accounts", "export_account_data", "check_username_availability"]),
    ("calendar",
     "Calendar management: events, attendees, reminders, scheduling and availability",
     "Use for creating events and reminders or finding free time slots",
     ["create_event", "update_event", "delete_event", "list_events",
      "get_event_details", "invite_attendee", "remove_attendee", "set_reminder",
      "cancel_reminder", "list_reminders", "find_free_slot", "block_time_range",
      "share_calendar", "unshare_calendar", "import_ics", "export_ics",
      "set_recurrence", "clear_recurrence", "merge_calendars"]),
    ("finance",
     "Financial services: ledgers, transactions, payments, invoices, currency conversion",
     "Use for money movement and bookkeeping operations",
     ["open_ledger", "close_ledger", "record_transaction", "void_transaction",
      "transfer_funds", "get_balance", "list_transactions", "schedule_payment",
      "cancel_payment", "convert_currency", "get_exchange_rate", "create_invoice",
      "send_invoice", "mark_invoice_paid", "apply_discount", "calculate_tax",
      "generate_statement", "categorize_expense", "forecast_cashflow"]),
    ("healthcare",
     "Healthcare services: appointments, patient records, prescriptions, labs, insurance claims",
     "Use for clinical scheduling and record keeping workflows",
     ["book_appointment", "cancel_appointment", "reschedule_appointment",
      "list_appointments", "register_patient", "update_patient_record",
      "get_patient_record", "add_prescription", "renew_prescription",
      "list_prescriptions", "record_vitals", "get_vitals_history", "order_lab_test",
      "get_lab_results", "refer_specialist", "check_insurance_coverage",
      "submit_claim", "track_claim_status"]),
]

NOISE_STAGE2 = [
    ("advertising",
     "Advertising platform operations: campaigns, ad groups, creatives, targeting, reporting",
     "Use for managing ad delivery and pulling performance reports",
     ["create_campaign", "pause_campaign", "resume_campaign", "end_campaign",
      "list_campaigns", "set_campaign_budget", "get_campaign_stats",
      "create_ad_group", "delete_ad_group", "upload_creative", "review_creative",
      "target_audience", "exclude_audience", "bid_keyword", "get_keyword_ideas",
      "schedule_ad", "get_impression_report", "get_click_report"]),
    ("business",
     "Business administration: company profiles, staffing, projects, procurement, logistics",
     "Use for back-office company and project operations",
     ["create_company_profile", "update_company_profile", "search_companies",
      "get_company_details", "list_employees", "add_employee", "remove_employee",
      "assign_role", "create_project", "archive_project", "list_projects",
      "log_work_hours", "approve_timesheet", "generate_payroll",
      "create_purchase_order", "approve_purchase_order", "track_shipment",
      "rate_supplier"]),
    ("music",
     "Music streaming: search, playback, playlists, artists, listening history",
     "Use for controlling playback and organizing playlists",
     ["search_track", "get_track_details", "play_track", "pause_playback",
      "skip_track", "create_playlist", "delete_playlist", "add_to_playlist",
      "remove_from_playlist", "shuffle_playlist", "get_recommendations",
      "follow_artist", "unfollow_artist", "get_artist_albums", "get_album_tracks",
      "like_track", "unlike_track", "get_listening_history", "set_volume"]),
]

NOISE_PARAMS = [("request_id", "string", False), ("payload", "object", True)]

NOISE_DOCS = [
    ("Invokes the {phrase} endpoint of the service. The payload object carries the "
     "request fields defined by the service schema; request_id is echoed back for "
     "tracing. Responses are returned as structured JSON in the call response. "
     "Authentication and rate limiting follow the platform defaults."),
    ("Calls the {phrase} operation on the remote service. Provide the operation "
     "fields inside payload; unknown fields are rejected. The call returns the "
     "service response inline and never writes workspace files. Retries are safe "
     "because the operation is idempotent per request_id."),
]


def noise_tool(name, salt):
    phrase = words_from_name(name)
    brief = "Service operation: " + phrase + "."
    doc = stable_pick(name, salt, NOISE_DOCS).format(phrase=phrase)
    params = [{"name": p, "type": t, "required": r} for (p, t, r) in NOISE_PARAMS]
    return {"name": name, "brief": brief, "document": doc, "params": params}


def noise_tree(spec, salt):
    return {"kits": [
        {"kit": kit, "applicable_tasks": tasks, "typical_usage": usage,
         "tools": [noise_tool(n, salt) for n in names]}
        for (kit, tasks, usage, names) in spec
    ]}


# ---------------------------------------------------------------- fixtures

def fixture_f1():
    root = "/workspace/benchmark/data/question42"
    days = ["%02d" % d for d in range(1, 11)]
    albedo = ["%s/2023_05_%s_albedo.tif" % (root, d) for d in days]
    bt = ["%s/2023_05_%s_bt.tif" % (root, d) for d in days]
    ati_out = ["%s/ati_result_%d.tif" % (root, i) for i in range(1, 11)]
    gt = [{"tool": "get_filelist", "args": {"path": root + "/"}}]
    gt += [{"tool": "ATI", "args": {"albedo_path": a, "bt_path": b}}
           for a, b in zip(albedo, bt)]
    ratio_args = {"image_paths": ati_out, "threshold": 1.0, "mode": "below"}
    gt.append({"tool": "calculate_threshold_ratio", "args": ratio_args})
    return {
        "question_id": "case_f1",
        "query": ("Across the first ten days of May 2023, invert apparent thermal inertia "
                  "from the provided daily albedo and brightness temperature rasters, then "
                  "determine the proportion of the region with ATI below 1.0 indicating "
                  "drought stress."),
        "choices": ["A. 12.40%", "B. 33.55%", "C. 55.18%", "D. 70.92%"],
        "gt_answer": "D",
        "gt_trajectory": gt,
        "initial_files": sorted(albedo + bt),
        "behaviors": [
            {"tool": "ATI",
             "args_pattern": {"albedo_path": "*", "bt_path": "*"},
             "response_template": "Result saved at %s/ati_result_{n}.tif" % root,
             "output_files": ["%s/ati_result_{n}.tif" % root]},
            {"tool": "calculate_threshold_ratio", "args": ratio_args,
             "response_template": "70.92%"},
        ],
    }


def fixture_f2():
    root = "/workspace/benchmark/data/question141"
    days = ["%02d" % d for d in range(1, 16)]
    files_2020 = ["%s/2020_08_%s_reflectance.tif" % (root, d) for d in days]
    files_2022 = ["%s/2022_08_%s_reflectance.tif" % (root, d) for d in days]
    ndti_2020 = ["%s/ndti_result_%d.tif" % (root, i) for i in range(1, 16)]
    ndti_2022 = ["%s/ndti_result_%d.tif" % (root, i) for i in range(16, 31)]
    gt = [
        {"tool": "get_filelist", "args": {"path": root + "/"}},
        {"tool": "calculate_batch_ndti", "args": {"file_list": files_2020}},
        {"tool": "calc_batch_image_mean_mean", "args": {"image_paths": ndti_2020}},
        {"tool": "calculate_batch_ndti", "args": {"file_list": files_2022}},
        {"tool": "calc_batch_image_mean_mean", "args": {"image_paths": ndti_2022}},
    ]
    return {
        "question_id": "case_f2",
        "query": ("Using the August 2020 and August 2022 reflectance scenes of the Dead Sea, "
                  "compute the normalized difference turbidity index for each year and "
                  "determine how the mean turbidity changed between the two years."),
        "choices": ["A. Turbidity decreased markedly", "B. Turbidity increased",
                    "C. No significant change", "D. Turbidity fluctuated randomly"],
        "gt_answer": "B",
        "gt_trajectory": gt,
        "initial_files": sorted(files_2020 + files_2022),
        "behaviors": [
            {"tool": "calculate_batch_ndti", "args": {"file_list": files_2020},
             "response_template": ("Result saved at %s/ndti_result_{n}.tif through "
                                   "%s/ndti_result_{last_n}.tif ({count} files)" % (root, root)),
             "output_files": ["%s/ndti_result_{n}.tif" % root] * 15},
            {"tool": "calculate_batch_ndti", "args": {"file_list": files_2022},
             "response_template": ("Result saved at %s/ndti_result_{n}.tif through "
                                   "%s/ndti_result_{last_n}.tif ({count} files)" % (root, root)),
             "output_files": ["%s/ndti_result_{n}.tif" % root] * 15},
            {"tool": "calc_batch_image_mean_mean", "args": {"image_paths": ndti_2020},
             "response_template": "121191.78"},
            {"tool": "calc_batch_image_mean_mean", "args": {"image_paths": ndti_2022},
             "response_template": "55128.48"},
        ],
    }


def fixture_a1():
    root = "/workspace/benchmark/data/question33"
    b31 = root + "/2021_08_05_0310_BT_31.tif"
    b32 = root + "/2021_08_05_0310_BT_32.tif"
    lst = root + "/lst_result_1.tif"
    sw_args = {"band31_path": b31, "band32_path": b32}
    ratio_args = {"image_paths": [lst], "threshold": 305.0, "mode": "above"}
    return {
        "question_id": "case_a1",
        "query": ("Using the thermal band 31 and band 32 acquisitions over irrigated "
                  "farmland in northern Hebei on 2021-08-05, retrieve land surface "
                  "temperature with the split-window algorithm and compute the percentage "
                  "of pixels above 305 K."),
        "choices": ["A. 21.40%", "B. 39.86%", "C. 47.04%", "D. 63.17%"],
        "gt_answer": "D",
        "gt_trajectory": [
            {"tool": "get_filelist", "args": {"path": root + "/"}},
            {"tool": "split_window", "args": sw_args},
            {"tool": "calculate_threshold_ratio", "args": ratio_args},
        ],
        "initial_files": [b31, b32],
        "behaviors": [
            {"tool": "split_window",
             "args": {"band31_path": root + "/b31.tif", "band32_path": root + "/b32.tif"},
             "error_response": ("split_window failed: no such file b31.tif; list the "
                                "workspace first and use the exact filenames")},
            {"tool": "split_window", "args": sw_args,
             "response_template": "Result saved at %s/lst_result_{n}.tif" % root,
             "output_files": ["%s/lst_result_{n}.tif" % root]},
            {"tool": "calculate_threshold_ratio", "args": ratio_args,
             "response_template": "63.17%"},
        ],
    }


def fixture_a2():
    root = "/workspace/benchmark/data/question61"
    stamps = [("01", "0455"), ("15", "0505"), ("29", "0515")]
    bands = ["2", "5", "17", "18", "19"]
    files = {}
    for day, hhmm in stamps:
        files[day] = {b: "%s/2020_07_%s_%s_Reflectance_%s.tif" % (root, day, hhmm, b)
                      for b in bands}
    pwv = ["%s/pwv_result_%d.tif" % (root, i) for i in range(1, 4)]

    def br_args(day):
        f = files[day]
        return {"b02_path": f["2"], "b05_path": f["5"], "b17_path": f["17"],
                "b18_path": f["18"], "b19_path": f["19"]}

    mean_args = {"image_paths": pwv}
    values = [9.615, 12.234, 12.324]
    gt = [
        {"tool": "get_filelist", "args": {"path": root + "/"}},
        {"tool": "band_ratio", "args": br_args("01")},
        {"tool": "band_ratio", "args": br_args("15")},
        {"tool": "band_ratio", "args": br_args("29")},
        {"tool": "calc_batch_image_mean", "args": mean_args},
        {"tool": "mean", "args": {"values": values}},
    ]
    responses = {"01": "9.615", "15": "12.234", "29": "12.324"}
    behaviors = [
        {"tool": "band_ratio",
         "args": {"b02_path": root + "/b02.tif", "b05_path": root + "/b05.tif",
                  "b17_path": root + "/b17.tif", "b18_path": root + "/b18.tif",
                  "b19_path": root + "/b19.tif"},
         "error_response": ("band_ratio failed: wrong path b02.tif; list the workspace "
                            "and use the exact reflectance filenames")},
    ]
    for day, _ in stamps:
        behaviors.append(
            {"tool": "band_ratio", "args": br_args(day),
             "response_template": ("Water vapor retrieval complete. Result saved at "
                                   "%s/pwv_result_{n}.tif (%s g/cm2)" % (root, responses[day])),
             "output_files": ["%s/pwv_result_{n}.tif" % root]})
    behaviors += [
        {"tool": "calc_batch_image_mean", "args": mean_args,
         "response_template": "[9.615, 12.234, 12.324]"},
        {"tool": "mean", "args": {"values": values}, "response_template": "11.391"},
    ]
    return {
        "question_id": "case_a2",
        "query": ("Using the MODIS b02/b05/b17/b18/b19 surface reflectance acquisitions over "
                  "the Turpan region in July 2020, estimate daily atmospheric water vapor "
                  "with the band ratio method and compute the monthly average."),
        "choices": ["A. 9.6150", "B. 10.2240", "C. 11.3910", "D. 12.3240"],
        "gt_answer": "C",
        "gt_trajectory": gt,
        "initial_files": sorted(p for f in files.values() for p in f.values()),
        "behaviors": behaviors,
    }


PLANS = {
    "same_domain.json": {
        "mode": "same_domain",
        "increments": [0, 20, 40, 60, 80],
        "seed": 0,
        "sampling": "stratified",
        "paradigms": ["flat", "active"],
    },
    "cross_domain.json": {
        "mode": "cross_domain",
        "stage_manifests": ["../noise/stage1_api_services.json",
                            "../noise/stage2_web_services.json"],
        "paradigms": ["flat", "active"],
    },
}


def dump(path, obj):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


def main():
    dump(os.path.join(OUT, "reference_tree.json"), reference_tree())
    dump(os.path.join(OUT, "noise", "stage1_api_services.json"),
         noise_tree(NOISE_STAGE1, "n1"))
    dump(os.path.join(OUT, "noise", "stage2_web_services.json"),
         noise_tree(NOISE_STAGE2, "n2"))
    for fx in (fixture_f1(), fixture_f2(), fixture_a1(), fixture_a2()):
        dump(os.path.join(OUT, "fixtures", fx["question_id"] + ".json"), fx)
    for name, plan in PLANS.items():
        dump(os.path.join(OUT, "plans", name), plan)
    counts = {k["kit"]: len(k["tools"]) for k in KITS}
    print("reference:", sum(counts.values()), counts)
    print("noise1:", sum(len(n) for *_, n in NOISE_STAGE1),
          "noise2:", sum(len(n) for *_, n in NOISE_STAGE2))


if __name__ == "__main__":
    main()
