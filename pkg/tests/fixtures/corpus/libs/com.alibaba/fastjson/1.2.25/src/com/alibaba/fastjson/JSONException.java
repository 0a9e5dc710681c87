package com.alibaba.fastjson;

public class JSONException extends RuntimeException {

    public JSONException(String message) {
        super(message);
    }
}
