package com.alibaba.fastjson;

import com.alibaba.fastjson.parser.DefaultJSONParser;
import com.alibaba.fastjson.parser.ParserConfig;
import com.alibaba.fastjson.serializer.JSONSerializer;

public abstract class JSON {

    public static final String VERSION = "1.2.25";

    public static Object parse(String text) {
        DefaultJSONParser parser = new DefaultJSONParser(text, ParserConfig.getGlobalInstance());
        Object value = parser.parse();
        parser.close();
        return value;
    }

    public static Object parseObject(String text) {
        Object obj = parse(text);
        return obj;
    }

    public static <T> T parseObject(String text, Class<T> clazz) {
        DefaultJSONParser parser = new DefaultJSONParser(text, ParserConfig.getGlobalInstance());
        T value = (T) parser.parseObject(clazz);
        parser.close();
        return value;
    }

    public static String toJSONString(Object object) {
        JSONSerializer serializer = new JSONSerializer();
        serializer.write(object);
        return serializer.toString();
    }
}
