TASK_DIM = "n_task"
DESIGN_POINT_DIM = "n_design_point"

DIM_NAMES = [TASK_DIM, DESIGN_POINT_DIM]

MATRIX_DIMS = [TASK_DIM, DESIGN_POINT_DIM]

TASK_ID = "task_id"
TASK_ID_ATTRS = {
    "cf_role": "task_id",
    "long_name": "Unique identifier of each task",
}

TASK_LABEL = "task_label"
TASK_LABEL_ATTRS = {
    "long_name": "Free text description of each task",
}

DESIGN_POINT = "design_point"
DESIGN_POINT_ATTRS = {
    "long_name": "Design point column index, 1 is the fastest and highest powered",
}

CURRENT = "current"
CURRENT_ATTRS = {
    "cf_role": "current",
    "long_name": "Average total platform current of each design point",
    "units": "mA",
}

DURATION = "duration"
DURATION_ATTRS = {
    "cf_role": "duration",
    "long_name": "Execution time of each design point",
    "units": "min",
}

VOLTAGE = "voltage"
VOLTAGE_ATTRS = {
    "cf_role": "voltage",
    "long_name": "Supply voltage of each design point relative to the energy unit",
    "units": "1",
}

MATRIX_NAMES = [CURRENT, DURATION, VOLTAGE]

MATRIX_ATTRS = {
    CURRENT: CURRENT_ATTRS,
    DURATION: DURATION_ATTRS,
    VOLTAGE: VOLTAGE_ATTRS,
}

DEADLINE_ATTRS = {
    "long_name": "Completion deadline of the whole task graph",
    "units": "min",
}
