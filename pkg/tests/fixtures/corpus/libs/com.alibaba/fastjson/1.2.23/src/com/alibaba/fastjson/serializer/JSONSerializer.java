package com.alibaba.fastjson.serializer;

public class JSONSerializer {

    private final StringBuilder out = new StringBuilder();

    public void write(Object object) {
        if (object == null) {
            out.append("null");
            return;
        }
        out.append('"').append(object.toString()).append('"');
    }

    public String toString() {
        return out.toString();
    }
}
